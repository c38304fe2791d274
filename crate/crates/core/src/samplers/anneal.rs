//! Single-flip Metropolis simulated annealing.
//!
//! Each read starts from a uniform random assignment and sweeps the
//! variables in index order once per temperature step. Read `r` draws from
//! ChaCha8 stream `r` of the master seed, so results do not depend on how
//! reads are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SampleSet;
use crate::error::{Error, Result};
use crate::qubo::{Couplings, QuboModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub num_sweeps: usize,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub interpolation: Interpolation,
}

impl AnnealSchedule {
    pub const DEFAULT_SWEEPS: usize = 1000;
    pub const DEFAULT_BETA_FINAL: f64 = 10.0;

    /// Geometric from `1 / max|q_ij|` to 10 over 1000 sweeps.
    pub fn default_for(model: &QuboModel) -> Self {
        let max = model.max_abs_coefficient();
        Self {
            num_sweeps: Self::DEFAULT_SWEEPS,
            beta_initial: if max == 0 { 0.1 } else { 1.0 / max as f64 },
            beta_final: Self::DEFAULT_BETA_FINAL,
            interpolation: Interpolation::Geometric,
        }
    }

    pub fn with_sweeps(self, num_sweeps: usize) -> Self {
        Self { num_sweeps, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sweeps == 0 {
            return Err(Error::Config("num_sweeps must be at least 1".into()));
        }
        if !(self.beta_initial.is_finite() && self.beta_final.is_finite()) {
            return Err(Error::Config("inverse temperatures must be finite".into()));
        }
        if self.beta_initial >= self.beta_final {
            return Err(Error::Config(format!(
                "beta_initial ({}) must be below beta_final ({})",
                self.beta_initial, self.beta_final
            )));
        }
        if self.interpolation == Interpolation::Geometric && self.beta_initial <= 0.0 {
            return Err(Error::Config(
                "geometric schedules need beta_initial > 0".into(),
            ));
        }
        Ok(())
    }

    /// Inverse temperature for each sweep.
    pub fn betas(&self) -> Vec<f64> {
        let steps = self.num_sweeps;
        if steps == 1 {
            return vec![self.beta_final];
        }
        (0..steps)
            .map(|t| {
                let f = t as f64 / (steps - 1) as f64;
                match self.interpolation {
                    Interpolation::Geometric => {
                        self.beta_initial * (self.beta_final / self.beta_initial).powf(f)
                    }
                    Interpolation::Linear => {
                        self.beta_initial + (self.beta_final - self.beta_initial) * f
                    }
                }
            })
            .collect()
    }
}

pub fn sample_annealing(
    model: &QuboModel,
    num_reads: usize,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<SampleSet> {
    if num_reads == 0 {
        return Err(Error::Config("num_reads must be at least 1".into()));
    }
    schedule.validate()?;
    let couplings = model.couplings();
    let betas = schedule.betas();
    let reads: Vec<Vec<bool>> = (0..num_reads)
        .into_par_iter()
        .map(|r| anneal_once(&couplings, &betas, seed, r as u64))
        .collect();
    SampleSet::from_reads(model, reads, "simulated-annealing", Some(seed))
}

fn anneal_once(c: &Couplings, betas: &[f64], seed: u64, stream: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut state: Vec<bool> = (0..c.n()).map(|_| rng.gen()).collect();
    for &beta in betas {
        for i in 0..c.n() {
            let delta = c.flip_delta(&state, i);
            if delta <= 0 || rng.gen::<f64>() < (-beta * delta as f64).exp() {
                state[i] = !state[i];
            }
        }
    }
    state
}
