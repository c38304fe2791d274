//! Exhaustive QUBO minimization.
//!
//! Variables are split into an enumerated part and a set of mutually
//! uncoupled "free" variables. Once the enumerated variables are fixed, each
//! free variable sees a fixed field and is minimized independently
//! (`x = 1` iff its field is negative, either value when it is zero). This
//! is exact for every QUBO and turns the Min-k-Union models, whose element
//! variables never couple to each other, into a `2^|S|` enumeration.

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

/// Default limit on enumerated (non-free) variables.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub min_energy: i64,
    /// Every global minimizer, in lexicographic order (variable 0 first).
    pub minimizers: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    /// Maximum number of enumerated variables.
    pub cap: usize,
    /// Maximum number of minimizers to materialize.
    pub max_minimizers: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        Self {
            cap: DEFAULT_BRUTE_FORCE_CAP,
            max_minimizers: 1 << 20,
        }
    }
}

pub fn solve_brute_force(model: &QuboModel) -> Result<BruteForceResult> {
    BruteForce::default().solve(model)
}

impl BruteForce {
    pub fn solve(&self, model: &QuboModel) -> Result<BruteForceResult> {
        let c = model.couplings();
        let n = c.n();

        // Greedy independent set, scanning from the last variable down.
        let mut free = vec![false; n];
        for i in (0..n).rev() {
            if c.neighbors[i].iter().all(|&(j, _)| !free[j]) {
                free[i] = true;
            }
        }
        let enumerated: Vec<usize> = (0..n).filter(|&i| !free[i]).collect();
        let free_vars: Vec<usize> = (0..n).filter(|&i| free[i]).collect();
        if enumerated.len() > self.cap.min(63) {
            return Err(Error::Capacity(format!(
                "{} coupled variables need 2^{} evaluations, above the brute-force cap of {}; \
                 use the annealing sampler",
                enumerated.len(),
                enumerated.len(),
                self.cap
            )));
        }

        // Free variables stay 0 in `state`; their best contribution is tracked
        // separately as `free_sum = Σ min(0, field)`.
        let mut state = vec![false; n];
        let mut field: Vec<i64> = c.linear.clone();
        let mut free_sum: i64 = free_vars.iter().map(|&f| field[f].min(0)).sum();
        let mut fixed_energy = c.offset;

        let mut best = fixed_energy + free_sum;
        let mut best_masks: Vec<u64> = vec![0];
        let mut mask: u64 = 0;
        for t in 1u64..1 << enumerated.len() {
            let slot = t.trailing_zeros() as usize;
            let var = enumerated[slot];
            fixed_energy += c.flip_delta(&state, var);
            state[var] = !state[var];
            mask ^= 1 << slot;
            let sign = if state[var] { 1 } else { -1 };
            for &(j, q) in &c.neighbors[var] {
                if free[j] {
                    free_sum -= field[j].min(0);
                    field[j] += sign * q;
                    free_sum += field[j].min(0);
                }
            }
            let total = fixed_energy + free_sum;
            if total < best {
                best = total;
                best_masks.clear();
                best_masks.push(mask);
            } else if total == best {
                best_masks.push(mask);
            }
        }

        let mut minimizers = Vec::new();
        for m in best_masks {
            let mut bits = vec![false; n];
            for (slot, &var) in enumerated.iter().enumerate() {
                bits[var] = m >> slot & 1 == 1;
            }
            let mut undecided = Vec::new();
            for &f in &free_vars {
                let h = c.linear[f]
                    + c.neighbors[f]
                        .iter()
                        .filter(|&&(j, _)| bits[j])
                        .map(|&(_, q)| q)
                        .sum::<i64>();
                match h {
                    h if h < 0 => bits[f] = true,
                    0 => undecided.push(f),
                    _ => {}
                }
            }
            let expansions = 1usize.checked_shl(undecided.len() as u32).unwrap_or(usize::MAX);
            if minimizers.len().saturating_add(expansions) > self.max_minimizers {
                return Err(Error::Capacity(format!(
                    "more than {} minimizers",
                    self.max_minimizers
                )));
            }
            for choice in 0..expansions {
                let mut b = bits.clone();
                for (s, &f) in undecided.iter().enumerate() {
                    b[f] = choice >> s & 1 == 1;
                }
                minimizers.push(b);
            }
        }
        minimizers.sort();
        Ok(BruteForceResult {
            min_energy: best,
            minimizers,
        })
    }
}
