//! Classical QUBO solvers and the shared sample-set type.

mod anneal;
mod brute;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

pub use anneal::{sample_annealing, AnnealSchedule, Interpolation};
pub use brute::{solve_brute_force, BruteForce, BruteForceResult, DEFAULT_BRUTE_FORCE_CAP};

/// One distinct assignment with how often it was drawn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    #[serde(with = "bitstring")]
    pub assignment: Vec<bool>,
    pub energy: i64,
    pub occurrences: usize,
}

/// Aggregated reads, sorted by energy and then by assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    pub backend: String,
    pub seed: Option<u64>,
    pub num_reads: usize,
    pub records: Vec<SampleRecord>,
}

impl SampleSet {
    /// Aggregates raw reads, computing each energy from `model`.
    pub fn from_reads(
        model: &QuboModel,
        reads: impl IntoIterator<Item = Vec<bool>>,
        backend: impl Into<String>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut counts: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        for read in reads {
            *counts.entry(read).or_default() += 1;
        }
        let weighted = counts
            .into_iter()
            .map(|(assignment, occurrences)| Ok((model.energy(&assignment)?, assignment, occurrences)))
            .collect::<Result<Vec<_>>>()?;
        let set = Self::from_counts(
            weighted.into_iter().map(|(e, a, k)| (a, e, k)),
            backend,
            seed,
        )?;
        set.check(model)?;
        Ok(set)
    }

    /// Builds a set from `(assignment, energy, occurrences)` triples whose
    /// energies are already known. Repeated assignments are merged.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (Vec<bool>, i64, usize)>,
        backend: impl Into<String>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Vec<bool>, (i64, usize)> = BTreeMap::new();
        for (assignment, energy, occurrences) in counts {
            let slot = merged.entry(assignment).or_insert((energy, 0));
            if slot.0 != energy {
                return Err(Error::Integrity("one assignment with two energies".into()));
            }
            slot.1 += occurrences;
        }
        let mut records: Vec<SampleRecord> = merged
            .into_iter()
            .filter(|(_, (_, k))| *k > 0)
            .map(|(assignment, (energy, occurrences))| SampleRecord {
                assignment,
                energy,
                occurrences,
            })
            .collect();
        records.sort_by(|a, b| (a.energy, &a.assignment).cmp(&(b.energy, &b.assignment)));
        let set = Self {
            backend: backend.into(),
            seed,
            num_reads: records.iter().map(|r| r.occurrences).sum(),
            records,
        };
        set.check_structure()?;
        Ok(set)
    }

    /// Verifies occurrence totals, ordering, uniqueness and stored energies.
    pub fn check(&self, model: &QuboModel) -> Result<()> {
        self.check_structure()?;
        for r in &self.records {
            let e = model.energy(&r.assignment)?;
            if e != r.energy {
                return Err(Error::Integrity(format!(
                    "record energy {} differs from model energy {e}",
                    r.energy
                )));
            }
        }
        Ok(())
    }

    /// The model-independent part of [`check`](Self::check).
    pub fn check_structure(&self) -> Result<()> {
        let total: usize = self.records.iter().map(|r| r.occurrences).sum();
        if total != self.num_reads {
            return Err(Error::Integrity(format!(
                "occurrences sum to {total}, num_reads is {}",
                self.num_reads
            )));
        }
        if self.records.iter().any(|r| r.occurrences == 0) {
            return Err(Error::Integrity("record with zero occurrences".into()));
        }
        let ordered = self.records.windows(2).all(|w| {
            (w[0].energy, &w[0].assignment) < (w[1].energy, &w[1].assignment)
        });
        if !ordered {
            return Err(Error::Integrity(
                "records not strictly ordered by (energy, assignment)".into(),
            ));
        }
        Ok(())
    }

    pub fn best(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    /// One row per distinct energy, ascending.
    pub fn histogram(&self) -> Vec<HistogramRow> {
        let mut rows: BTreeMap<i64, HistogramRow> = BTreeMap::new();
        for r in &self.records {
            let row = rows.entry(r.energy).or_insert(HistogramRow {
                energy: r.energy,
                occurrences: 0,
                distinct: 0,
            });
            row.occurrences += r.occurrences;
            row.distinct += 1;
        }
        rows.into_values().collect()
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("energy,occurrences,distinct\n");
        for row in self.histogram() {
            out.push_str(&format!("{},{},{}\n", row.energy, row.occurrences, row.distinct));
        }
        out
    }

    pub fn to_document(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a sample-set document and checks its model-independent invariants.
    pub fn from_document(text: &str) -> Result<Self> {
        let set: Self = serde_json::from_str(text)?;
        set.check_structure().map_err(|e| Error::Document(e.to_string()))?;
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub energy: i64,
    pub occurrences: usize,
    pub distinct: usize,
}

pub(crate) mod bitstring {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::qubo::bits_to_string(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let s = String::deserialize(d)?;
        crate::qubo::bits_from_str(&s).map_err(serde::de::Error::custom)
    }
}
