//! Integer QUBO models and the Min-k-Union compilation.
//!
//! For sets `M` (variables `x_M`) and elements `v` (variables `y_v`), the
//! compiled energy is
//!
//! ```text
//! H = A (k - Σ x_M)^2  +  B Σ_{v ∈ M} (1 - y_v) x_M  +  C Σ y_v
//! ```
//!
//! expanded into upper-triangular integer coefficients plus the constant
//! `A k^2`. With `A = B > C |V|` every global minimizer selects exactly `k`
//! sets with `y` equal to the union indicator, and its energy is `C |T|`.

mod decode;
mod io;
mod ising;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkunion::MinKUnionInstance;

pub use decode::SolutionReport;
pub use io::{QuboDocument, QuboFormat};
pub use ising::{spins_from_bits, IsingModel};

/// Penalty weights for the three energy terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Penalties {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Penalties {
    /// `A = B = |V| + 1`, `C = 1`: the smallest weights satisfying `A = B > C|V|`.
    pub fn default_for(num_elements: usize) -> Self {
        let a = num_elements as i64 + 1;
        Self { a, b: a, c: 1 }
    }

    pub fn validate(&self, num_elements: usize) -> Result<()> {
        if self.a <= 0 || self.b <= 0 || self.c <= 0 {
            return Err(Error::Config(format!(
                "penalties must be positive (A={}, B={}, C={})",
                self.a, self.b, self.c
            )));
        }
        if self.a != self.b {
            return Err(Error::Config(format!(
                "penalties violate A = B (A={}, B={})",
                self.a, self.b
            )));
        }
        let bound = self.c * num_elements as i64;
        if self.a <= bound {
            return Err(Error::Config(format!(
                "penalties violate A > C*|V| (A={}, C*|V|={}*{}={bound})",
                self.a, self.c, num_elements
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for Penalties {
    type Err = Error;

    /// Parses `A,B,C`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Config(format!("expected A,B,C, got {s:?}")));
        };
        let num = |p: &str| {
            p.parse::<i64>()
                .map_err(|_| Error::Config(format!("invalid penalty value {p:?}")))
        };
        Ok(Self {
            a: num(a)?,
            b: num(b)?,
            c: num(c)?,
        })
    }
}

/// Penalties and `k` a model was compiled with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PenaltyRecord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub k: usize,
}

/// Variable layout: set variables first, in set order, then element variables
/// in ground-set order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMap {
    /// `set_vars[j]` is the variable of set `j`.
    pub set_vars: Vec<usize>,
    /// `(element id, variable)` pairs in ground-set order.
    pub element_vars: Vec<(usize, usize)>,
    pub n: usize,
}

impl VariableMap {
    pub fn for_instance(inst: &MinKUnionInstance) -> Self {
        let s = inst.num_sets();
        Self {
            set_vars: (0..s).collect(),
            element_vars: inst
                .ground_set()
                .iter()
                .enumerate()
                .map(|(p, &v)| (v, s + p))
                .collect(),
            n: s + inst.num_elements(),
        }
    }

    pub fn element_var(&self, v: usize) -> Option<usize> {
        self.element_vars
            .binary_search_by_key(&v, |&(e, _)| e)
            .ok()
            .map(|p| self.element_vars[p].1)
    }
}

/// Upper-triangular integer QUBO with a constant offset.
///
/// `coefficients[(i, j)]` with `i < j` is the full pair weight of `x_i x_j`;
/// `(i, i)` is the linear weight of `x_i`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboModel {
    n: usize,
    coefficients: BTreeMap<(usize, usize), i64>,
    offset: i64,
    penalties: Option<PenaltyRecord>,
}

impl QuboModel {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            coefficients: BTreeMap::new(),
            offset: 0,
            penalties: None,
        }
    }

    /// Builds a model from `(i, j, q)` triples; `(j, i)` folds onto `(i, j)`.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (usize, usize, i64)>,
        offset: i64,
    ) -> Result<Self> {
        let mut model = Self::new(n);
        model.offset = offset;
        for (i, j, q) in terms {
            model.add(i, j, q)?;
        }
        Ok(model)
    }

    /// Accumulates `q` onto the `(min, max)` entry.
    pub fn add(&mut self, i: usize, j: usize, q: i64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::Domain(format!(
                "term ({i}, {j}) out of range for {} variables",
                self.n
            )));
        }
        let key = (i.min(j), i.max(j));
        let entry = self.coefficients.entry(key).or_insert(0);
        *entry += q;
        if *entry == 0 {
            self.coefficients.remove(&key);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn penalties(&self) -> Option<PenaltyRecord> {
        self.penalties
    }

    pub fn num_terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        self.coefficients
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0)
    }

    /// Stored terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.coefficients.iter().map(|(&(i, j), &q)| (i, j, q))
    }

    pub fn max_abs_coefficient(&self) -> i64 {
        self.coefficients.values().map(|q| q.abs()).max().unwrap_or(0)
    }

    /// `offset + Σ_{i ≤ j} q_ij x_i x_j`.
    pub fn energy(&self, assignment: &[bool]) -> Result<i64> {
        if assignment.len() != self.n {
            return Err(Error::Domain(format!(
                "assignment has {} bits, model has {} variables",
                assignment.len(),
                self.n
            )));
        }
        Ok(self.offset
            + self
                .terms()
                .filter(|&(i, j, _)| assignment[i] && assignment[j])
                .map(|(_, _, q)| q)
                .sum::<i64>())
    }

    /// Adjacency form used by the samplers.
    pub fn couplings(&self) -> Couplings {
        let mut linear = vec![0; self.n];
        let mut neighbors = vec![Vec::new(); self.n];
        for (i, j, q) in self.terms() {
            if i == j {
                linear[i] = q;
            } else {
                neighbors[i].push((j, q));
                neighbors[j].push((i, q));
            }
        }
        Couplings {
            offset: self.offset,
            linear,
            neighbors,
        }
    }
}

/// Per-variable view of a QUBO for incremental energy updates.
#[derive(Debug, Clone)]
pub struct Couplings {
    pub offset: i64,
    pub linear: Vec<i64>,
    pub neighbors: Vec<Vec<(usize, i64)>>,
}

impl Couplings {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    /// Energy change from flipping variable `i` in `state`.
    #[inline]
    pub fn flip_delta(&self, state: &[bool], i: usize) -> i64 {
        let field = self.linear[i]
            + self.neighbors[i]
                .iter()
                .filter(|&&(j, _)| state[j])
                .map(|&(_, q)| q)
                .sum::<i64>();
        if state[i] {
            -field
        } else {
            field
        }
    }

    pub fn energy(&self, state: &[bool]) -> i64 {
        let mut e = self.offset;
        for i in (0..self.n()).filter(|&i| state[i]) {
            e += self.linear[i];
            e += self.neighbors[i]
                .iter()
                .filter(|&&(j, _)| j > i && state[j])
                .map(|&(_, q)| q)
                .sum::<i64>();
        }
        e
    }
}

/// Compiles an instance into its QUBO, defaulting to `A = B = |V| + 1`, `C = 1`.
pub fn build_qubo(
    inst: &MinKUnionInstance,
    penalties: Option<Penalties>,
) -> Result<(QuboModel, VariableMap)> {
    let p = penalties.unwrap_or_else(|| Penalties::default_for(inst.num_elements()));
    p.validate(inst.num_elements())?;
    let vmap = VariableMap::for_instance(inst);
    let k = inst.k() as i64;
    let mut model = QuboModel::new(vmap.n);

    // A (k - Σx)^2 = A k^2 + A (1 - 2k) Σ x + 2A Σ_{M<M'} x x'
    model.offset = p.a * k * k;
    for (j, &xj) in vmap.set_vars.iter().enumerate() {
        model.add(xj, xj, p.a * (1 - 2 * k))?;
        for &xl in &vmap.set_vars[j + 1..] {
            model.add(xj, xl, 2 * p.a)?;
        }
    }
    // B (1 - y_v) x_M = B x_M - B x_M y_v
    for (j, set) in inst.sets().iter().enumerate() {
        let xj = vmap.set_vars[j];
        for &v in set {
            let yv = vmap.element_var(v).expect("instance elements are in the ground set");
            model.add(xj, xj, p.b)?;
            model.add(xj, yv, -p.b)?;
        }
    }
    for &(_, yv) in &vmap.element_vars {
        model.add(yv, yv, p.c)?;
    }

    model.penalties = Some(PenaltyRecord {
        a: p.a,
        b: p.b,
        c: p.c,
        k: inst.k(),
    });
    Ok((model, vmap))
}

/// Encodes a set choice with `y` set to the exact union indicator.
pub fn encode_selection(
    inst: &MinKUnionInstance,
    vmap: &VariableMap,
    indices: &[usize],
) -> Result<Vec<bool>> {
    let sel = inst.selection(indices.iter().copied())?;
    let mut bits = vec![false; vmap.n];
    for &j in &sel.indices {
        bits[vmap.set_vars[j]] = true;
    }
    for &v in &sel.union {
        bits[vmap.element_var(v).expect("union within ground set")] = true;
    }
    Ok(bits)
}

/// `0`/`1` string with variable 0 first.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Document(format!("invalid assignment bit {other:?}"))),
        })
        .collect()
}
