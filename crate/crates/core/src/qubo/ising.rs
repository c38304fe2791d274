use std::collections::BTreeMap;

use super::QuboModel;
use crate::error::{Error, Result};

/// Spin form `offset + Σ h_i s_i + Σ_{i<j} J_ij s_i s_j` over `s ∈ {-1, +1}^n`.
///
/// Coefficients are quarter-integers for integer QUBOs, so `f64` holds them
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub h: Vec<f64>,
    pub j: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
}

impl IsingModel {
    /// Substitutes `x = (1 + s) / 2`.
    pub fn from_qubo(model: &QuboModel) -> Self {
        let mut h = vec![0.0; model.n()];
        let mut j = BTreeMap::new();
        let mut offset = model.offset() as f64;
        for (a, b, q) in model.terms() {
            let q = q as f64;
            if a == b {
                h[a] += q / 2.0;
                offset += q / 2.0;
            } else {
                h[a] += q / 4.0;
                h[b] += q / 4.0;
                offset += q / 4.0;
                j.insert((a, b), q / 4.0);
            }
        }
        Self { h, j, offset }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.h.len() {
            return Err(Error::Domain(format!(
                "spin vector has {} entries, model has {}",
                spins.len(),
                self.h.len()
            )));
        }
        let s = |i: usize| f64::from(spins[i]);
        let linear: f64 = self.h.iter().enumerate().map(|(i, h)| h * s(i)).sum();
        let pair: f64 = self.j.iter().map(|(&(a, b), jab)| jab * s(a) * s(b)).sum();
        Ok(self.offset + linear + pair)
    }
}

impl QuboModel {
    pub fn to_ising(&self) -> IsingModel {
        IsingModel::from_qubo(self)
    }
}

/// `s = 2x - 1`.
pub fn spins_from_bits(bits: &[bool]) -> Vec<i8> {
    bits.iter().map(|&b| if b { 1 } else { -1 }).collect()
}
