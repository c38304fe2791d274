use serde::{Deserialize, Serialize};

use super::{bits_to_string, QuboModel, VariableMap};
use crate::error::{Error, Result};
use crate::minkunion::MinKUnionInstance;

/// A decoded assignment with its feasibility flags.
///
/// Union and objective are recomputed from the chosen sets; the `y` bits only
/// feed the `y_consistent` flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub backend: Option<String>,
    pub seed: Option<u64>,
    pub assignment: String,
    pub chosen: Vec<usize>,
    pub union: Vec<usize>,
    pub objective: usize,
    pub exactly_k: bool,
    pub y_consistent: bool,
    pub energy: i64,
    /// `energy == C * objective`, checked only when both flags hold.
    pub energy_identity: Option<bool>,
    /// Independent row-buffer count for the chosen bits, when a trace is known.
    pub row_misses: Option<usize>,
}

impl SolutionReport {
    pub fn decode(
        model: &QuboModel,
        vmap: &VariableMap,
        inst: &MinKUnionInstance,
        assignment: &[bool],
    ) -> Result<Self> {
        if assignment.len() != model.n() || vmap.n != model.n() {
            return Err(Error::Domain(format!(
                "assignment has {} bits, model has {} variables",
                assignment.len(),
                model.n()
            )));
        }
        let chosen: Vec<usize> = vmap
            .set_vars
            .iter()
            .enumerate()
            .filter(|(_, &var)| assignment[var])
            .map(|(j, _)| j)
            .collect();
        let sel = inst.selection(chosen.iter().copied())?;
        let exactly_k = sel.indices.len() == inst.k();
        let y_consistent = vmap
            .element_vars
            .iter()
            .all(|&(v, var)| assignment[var] == sel.union.binary_search(&v).is_ok());
        let energy = model.energy(assignment)?;
        let energy_identity = (exactly_k && y_consistent).then(|| {
            let c = model.penalties().map_or(1, |p| p.c);
            energy == c * sel.objective as i64
        });
        Ok(Self {
            backend: None,
            seed: None,
            assignment: bits_to_string(assignment),
            chosen: sel.indices,
            union: sel.union,
            objective: sel.objective,
            exactly_k,
            y_consistent,
            energy,
            energy_identity,
            row_misses: None,
        })
    }

    pub fn with_backend(mut self, backend: impl Into<String>, seed: Option<u64>) -> Self {
        self.backend = Some(backend.into());
        self.seed = seed;
        self
    }

    pub fn is_feasible(&self) -> bool {
        self.exactly_k
    }
}
