//! Min-k-Union instances with an exhaustive solver and a greedy baseline.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::ToggleSets;

/// Default cap on the number of k-subsets `solve_exact` will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// How the ground set is derived from toggle sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundSetPolicy {
    /// Only elements that appear in some set.
    #[default]
    UnionOfSets,
    /// Every transition index `1..=num_transitions`.
    AllTransitions,
}

/// Ground set `V`, ordered set collection and selection count `k`.
///
/// Set `j` is addressed by its position in `sets`. Sets are stored sorted and
/// deduplicated; every element must belong to `ground_set`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct MinKUnionInstance {
    ground_set: Vec<usize>,
    sets: Vec<Vec<usize>>,
    k: usize,
}

#[derive(Deserialize)]
struct RawInstance {
    ground_set: Vec<usize>,
    sets: Vec<Vec<usize>>,
    k: usize,
}

impl TryFrom<RawInstance> for MinKUnionInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Self::new(raw.ground_set, raw.sets, raw.k)
    }
}

impl MinKUnionInstance {
    pub fn new(mut ground_set: Vec<usize>, sets: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        ground_set.sort_unstable();
        ground_set.dedup();
        if k > sets.len() {
            return Err(Error::InfeasibleK { k, sets: sets.len() });
        }
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| s.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        for (j, set) in sets.iter().enumerate() {
            if let Some(v) = set.iter().find(|v| ground_set.binary_search(v).is_err()) {
                return Err(Error::Domain(format!(
                    "element {v} of set {j} is not in the ground set"
                )));
            }
        }
        Ok(Self { ground_set, sets, k })
    }

    /// Builds the instance whose sets are the per-bit toggle sets.
    pub fn from_toggle_sets(ts: &ToggleSets, k: usize, policy: GroundSetPolicy) -> Result<Self> {
        if k > ts.sets().len() {
            return Err(Error::InfeasibleK {
                k,
                sets: ts.sets().len(),
            });
        }
        let ground_set = match policy {
            GroundSetPolicy::UnionOfSets => ts
                .sets()
                .iter()
                .flatten()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            GroundSetPolicy::AllTransitions => (1..=ts.num_transitions()).collect(),
        };
        Self::new(ground_set, ts.sets().to_vec(), k)
    }

    pub fn ground_set(&self) -> &[usize] {
        &self.ground_set
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_elements(&self) -> usize {
        self.ground_set.len()
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Same sets and ground set, different `k`.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k > self.sets.len() {
            return Err(Error::InfeasibleK {
                k,
                sets: self.sets.len(),
            });
        }
        Ok(Self { k, ..self.clone() })
    }

    /// Position of element `v` in the ground set.
    pub fn element_position(&self, v: usize) -> Option<usize> {
        self.ground_set.binary_search(&v).ok()
    }

    /// Recomputes union and objective for the given set indices.
    pub fn selection(&self, indices: impl IntoIterator<Item = usize>) -> Result<Selection> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.sets.len()) {
            return Err(Error::Domain(format!(
                "set index {bad} out of range ({} sets)",
                self.sets.len()
            )));
        }
        let union: BTreeSet<usize> = indices
            .iter()
            .flat_map(|&j| self.sets[j].iter().copied())
            .collect();
        Ok(Selection {
            objective: union.len(),
            indices: indices.into_iter().collect(),
            union: union.into_iter().collect(),
        })
    }

    /// Exhaustive search over all k-subsets in lexicographic order.
    ///
    /// Returns one optimal selection (the lexicographically first), or every
    /// optimal selection when `enumerate_all` is set.
    pub fn solve_exact(&self, enumerate_all: bool) -> Result<Vec<Selection>> {
        self.solve_exact_capped(enumerate_all, DEFAULT_ENUMERATION_CAP)
    }

    pub fn solve_exact_capped(&self, enumerate_all: bool, cap: u128) -> Result<Vec<Selection>> {
        let m = self.sets.len();
        let combos = binomial(m, self.k);
        if combos > cap {
            return Err(Error::Capacity(format!(
                "C({m}, {}) = {combos} combinations exceeds the enumeration cap of {cap}; \
                 use the greedy solver or a QUBO backend",
                self.k
            )));
        }
        let masks = self.set_masks();
        let words = masks.first().map_or(0, Vec::len);

        let mut best = usize::MAX;
        let mut optima: Vec<Vec<usize>> = Vec::new();
        let mut combo: Vec<usize> = (0..self.k).collect();
        // Partial unions along the current combination prefix.
        let mut prefix = vec![vec![0u64; words]; self.k + 1];
        let mut depth = 0;
        loop {
            for d in depth..self.k {
                let (lo, hi) = prefix.split_at_mut(d + 1);
                for (w, out) in hi[0].iter_mut().enumerate() {
                    *out = lo[d][w] | masks[combo[d]][w];
                }
            }
            let size: usize = prefix[self.k].iter().map(|w| w.count_ones() as usize).sum();
            if size < best {
                best = size;
                optima.clear();
                optima.push(combo.clone());
            } else if size == best && enumerate_all {
                optima.push(combo.clone());
            }
            match next_combination(&mut combo, m) {
                Some(d) => depth = d,
                None => break,
            }
        }
        optima
            .into_iter()
            .map(|indices| self.selection(indices))
            .collect()
    }

    /// Repeatedly adds the set with the smallest marginal union growth,
    /// breaking ties by lowest index.
    pub fn solve_greedy(&self) -> Selection {
        let mut chosen = vec![false; self.sets.len()];
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for _ in 0..self.k {
            let (j, _) = self
                .sets
                .iter()
                .enumerate()
                .filter(|(j, _)| !chosen[*j])
                .map(|(j, s)| (j, s.iter().filter(|v| !covered.contains(v)).count()))
                .min_by_key(|&(j, growth)| (growth, j))
                .expect("k <= number of sets");
            chosen[j] = true;
            covered.extend(self.sets[j].iter().copied());
        }
        self.selection(chosen.iter().enumerate().filter(|(_, &c)| c).map(|(j, _)| j))
            .expect("indices in range")
    }

    fn set_masks(&self) -> Vec<Vec<u64>> {
        let words = self.ground_set.len().div_ceil(64);
        self.sets
            .iter()
            .map(|set| {
                let mut mask = vec![0u64; words];
                for &v in set {
                    let p = self.element_position(v).expect("validated");
                    mask[p / 64] |= 1 << (p % 64);
                }
                mask
            })
            .collect()
    }
}

/// Advances `combo` to the next k-combination of `0..m` in lexicographic order.
/// Returns the first position that changed, or `None` when exhausted.
fn next_combination(combo: &mut [usize], m: usize) -> Option<usize> {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - k + i {
            combo[i] += 1;
            for t in i + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
            return Some(i);
        }
    }
    None
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Chosen set indices with their recomputed union.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub union: Vec<usize>,
    pub objective: usize,
}

impl Selection {
    pub fn is_feasible(&self, k: usize) -> bool {
        self.indices.len() == k
    }
}
