//! Dense statevector simulation of QAOA on a QUBO cost function.
//!
//! Basis index `b` encodes the assignment with variable `i` equal to bit `i`
//! of `b`. A layer applies the diagonal phase `exp(-i γ E(b))` and then
//! `exp(-i β X)` on every qubit. The state starts in the uniform
//! superposition, so all-zero angles leave it unchanged.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::QuboModel;
use crate::samplers::SampleSet;

/// Largest qubit count simulated by default (2^20 amplitudes, 16 MiB).
pub const DEFAULT_QUBIT_CAP: usize = 20;

pub type StateVector = Vec<Complex64>;

/// Energy of every basis state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostSpectrum {
    n: usize,
    energies: Vec<i64>,
}

impl CostSpectrum {
    pub fn from_model(model: &QuboModel) -> Result<Self> {
        Self::from_model_capped(model, DEFAULT_QUBIT_CAP)
    }

    /// Enumerates all basis energies in Gray-code order with incremental updates.
    pub fn from_model_capped(model: &QuboModel, cap: usize) -> Result<Self> {
        let n = model.n();
        check_cap(n, cap)?;
        let c = model.couplings();
        let mut energies = vec![0i64; 1 << n];
        let mut state = vec![false; n];
        let mut e = c.offset;
        let mut gray = 0usize;
        energies[0] = e;
        for t in 1usize..1 << n {
            let q = t.trailing_zeros() as usize;
            e += c.flip_delta(&state, q);
            state[q] = !state[q];
            gray ^= 1 << q;
            energies[gray] = e;
        }
        Ok(Self { n, energies })
    }

    pub fn from_energies(energies: Vec<i64>) -> Result<Self> {
        if !energies.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "spectrum length {} is not a power of two",
                energies.len()
            )));
        }
        let n = energies.len().trailing_zeros() as usize;
        check_cap(n, DEFAULT_QUBIT_CAP)?;
        Ok(Self { n, energies })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[i64] {
        &self.energies
    }

    pub fn mean(&self) -> f64 {
        self.energies.iter().map(|&e| e as f64).sum::<f64>() / self.energies.len() as f64
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Capacity(format!(
            "{n} qubits need 2^{n} amplitudes, above the simulator cap of {cap} qubits"
        )));
    }
    Ok(())
}

/// Basis index to assignment, variable 0 first.
pub fn basis_bits(b: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| b >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        let params = Self { gammas, betas };
        params.validate()?;
        Ok(params)
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        }
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.gammas.is_empty() || self.gammas.len() != self.betas.len() {
            return Err(Error::Config(format!(
                "need p >= 1 with equal angle counts (got {} gammas, {} betas)",
                self.gammas.len(),
                self.betas.len()
            )));
        }
        Ok(())
    }

    fn from_flat(flat: &[f64]) -> Self {
        let p = flat.len() / 2;
        Self {
            gammas: flat[..p].to_vec(),
            betas: flat[p..].to_vec(),
        }
    }
}

pub fn uniform_state(n: usize) -> StateVector {
    let dim = 1usize << n;
    vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim]
}

/// Runs the QAOA circuit from the uniform superposition.
pub fn evolve(spectrum: &CostSpectrum, params: &QaoaParams) -> Result<StateVector> {
    params.validate()?;
    let mut state = uniform_state(spectrum.n);
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        apply_cost(&mut state, spectrum, gamma);
        apply_mixer(&mut state, spectrum.n, beta);
    }
    Ok(state)
}

fn apply_cost(state: &mut [Complex64], spectrum: &CostSpectrum, gamma: f64) {
    if gamma == 0.0 {
        return;
    }
    for (amp, &e) in state.iter_mut().zip(&spectrum.energies) {
        *amp *= Complex64::from_polar(1.0, -gamma * e as f64);
    }
}

/// `exp(-i β X) = cos β · I - i sin β · X` on each qubit.
fn apply_mixer(state: &mut [Complex64], n: usize, beta: f64) {
    if beta == 0.0 {
        return;
    }
    let (s, c) = beta.sin_cos();
    let minus_i_sin = Complex64::new(0.0, -s);
    for q in 0..n {
        let stride = 1usize << q;
        for block in state.chunks_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = x0 * c + x1 * minus_i_sin;
                *a1 = x1 * c + x0 * minus_i_sin;
            }
        }
    }
}

/// `Σ_b |amplitude_b|^2 E(b)`.
pub fn expectation(spectrum: &CostSpectrum, state: &[Complex64]) -> Result<f64> {
    if state.len() != spectrum.energies.len() {
        return Err(Error::Domain(format!(
            "state has {} amplitudes, spectrum has {}",
            state.len(),
            spectrum.energies.len()
        )));
    }
    Ok(state
        .iter()
        .zip(&spectrum.energies)
        .map(|(a, &e)| a.norm_sqr() * e as f64)
        .sum())
}

pub fn norm_sqr(state: &[Complex64]) -> f64 {
    state.iter().map(Complex64::norm_sqr).sum()
}

/// Draws `shots` basis states with probability `|amplitude|^2`.
pub fn sample_state(
    spectrum: &CostSpectrum,
    state: &[Complex64],
    shots: usize,
    seed: u64,
) -> Result<SampleSet> {
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    if state.len() != spectrum.energies.len() {
        return Err(Error::Domain(format!(
            "state has {} amplitudes, spectrum has {}",
            state.len(),
            spectrum.energies.len()
        )));
    }
    let mut cumulative = Vec::with_capacity(state.len());
    let mut acc = 0.0;
    for a in state {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let b = cumulative
            .partition_point(|&c| c <= u)
            .min(state.len() - 1);
        *counts.entry(b).or_default() += 1;
    }
    SampleSet::from_counts(
        counts
            .into_iter()
            .map(|(b, k)| (basis_bits(b, spectrum.n), spectrum.energies[b], k)),
        "qaoa-statevector",
        Some(seed),
    )
}

/// Search settings for [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    /// Lattice points per angle on `[0, π)` for `p = 1`.
    pub grid_points: usize,
    /// Random starting points for `p >= 2`, in addition to all-zero angles.
    pub multistarts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Evaluation budget per coordinate-descent run.
    pub max_evals: usize,
    pub shots: usize,
}

impl Default for Strategy {
    fn default() -> Self {
        Self {
            grid_points: 16,
            multistarts: 8,
            initial_step: PI / 32.0,
            min_step: 1e-4,
            max_evals: 2000,
            shots: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaResult {
    pub params: QaoaParams,
    pub expectation: f64,
    pub optimizer_trace: Vec<TraceEntry>,
    pub samples: SampleSet,
}

impl QaoaResult {
    pub fn to_document(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        r.params.validate()?;
        r.samples.check_structure()?;
        Ok(r)
    }
}

struct Search<'a> {
    spectrum: &'a CostSpectrum,
    trace: Vec<TraceEntry>,
}

impl Search<'_> {
    fn eval(&mut self, flat: &[f64]) -> f64 {
        let params = QaoaParams::from_flat(flat);
        let state = evolve(self.spectrum, &params).expect("validated params");
        let e = expectation(self.spectrum, &state).expect("matching length");
        self.trace.push(TraceEntry {
            gammas: params.gammas,
            betas: params.betas,
            expectation: e,
        });
        e
    }

    /// Accepts a move only when it beats the incumbent by more than rounding noise.
    fn improves(candidate: f64, incumbent: f64) -> bool {
        candidate < incumbent - 1e-12 * incumbent.abs().max(1.0)
    }

    fn coordinate_descent(&mut self, start: Vec<f64>, start_value: f64, strategy: &Strategy) -> (Vec<f64>, f64) {
        let (mut best, mut best_value) = (start, start_value);
        let mut step = strategy.initial_step;
        let mut evals = 0;
        while step >= strategy.min_step && evals < strategy.max_evals {
            let mut moved = false;
            'coords: for i in 0..best.len() {
                for dir in [1.0, -1.0] {
                    let mut candidate = best.clone();
                    candidate[i] += dir * step;
                    let value = self.eval(&candidate);
                    evals += 1;
                    if Self::improves(value, best_value) {
                        best = candidate;
                        best_value = value;
                        moved = true;
                        break 'coords;
                    }
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        (best, best_value)
    }
}

/// Grid search (p = 1) or seeded multi-start (p >= 2), then coordinate descent.
///
/// All-zero angles are always evaluated first and only strictly better points
/// replace them, so the result never does worse than the uniform state.
pub fn optimize(spectrum: &CostSpectrum, p: usize, strategy: &Strategy, seed: u64) -> Result<QaoaResult> {
    if p == 0 {
        return Err(Error::Config("QAOA needs p >= 1".into()));
    }
    if strategy.grid_points == 0 {
        return Err(Error::Config("grid_points must be at least 1".into()));
    }
    let mut search = Search {
        spectrum,
        trace: Vec::new(),
    };
    let zeros = vec![0.0; 2 * p];
    let zero_value = search.eval(&zeros);

    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    if p == 1 {
        let step = PI / strategy.grid_points as f64;
        let (mut best, mut best_value) = (zeros, zero_value);
        for g in 0..strategy.grid_points {
            for h in 0..strategy.grid_points {
                if g == 0 && h == 0 {
                    continue;
                }
                let point = vec![g as f64 * step, h as f64 * step];
                let value = search.eval(&point);
                if Search::improves(value, best_value) {
                    best = point;
                    best_value = value;
                }
            }
        }
        starts.push((best, best_value));
    } else {
        starts.push((zeros, zero_value));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0);
        for _ in 0..strategy.multistarts {
            let point: Vec<f64> = (0..2 * p).map(|_| rng.gen::<f64>() * PI).collect();
            let value = search.eval(&point);
            starts.push((point, value));
        }
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for (start, value) in starts {
        let refined = search.coordinate_descent(start, value, strategy);
        if best.as_ref().is_none_or(|b| Search::improves(refined.1, b.1)) {
            best = Some(refined);
        }
    }
    let (flat, value) = best.expect("at least one start");
    let params = QaoaParams::from_flat(&flat);
    let state = evolve(spectrum, &params)?;
    let samples = sample_state(spectrum, &state, strategy.shots.max(1), seed)?;
    Ok(QaoaResult {
        params,
        expectation: value,
        optimizer_trace: search.trace,
        samples,
    })
}
