//! QUBO interchange.
//!
//! Coordinate text is a header `n <num_vars> <num_terms> <offset>` followed
//! by one `i j q` line per stored term in `(i, j)` order, `\n`-terminated.
//! The structured document is JSON carrying the penalty record and the
//! variable map alongside the terms.

use serde::{Deserialize, Serialize};

use super::{PenaltyRecord, QuboModel, VariableMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuboFormat {
    CoordinateText,
    Document,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuboDocument {
    pub n: usize,
    pub offset: i64,
    pub penalties: Option<PenaltyRecord>,
    pub variables: Option<VariableMap>,
    pub terms: Vec<(usize, usize, i64)>,
}

impl QuboDocument {
    pub fn new(model: &QuboModel, vmap: Option<&VariableMap>) -> Self {
        Self {
            n: model.n(),
            offset: model.offset(),
            penalties: model.penalties(),
            variables: vmap.cloned(),
            terms: model.terms().collect(),
        }
    }

    pub fn into_model(self) -> Result<(QuboModel, Option<VariableMap>)> {
        if self.terms.windows(2).any(|w| (w[0].0, w[0].1) >= (w[1].0, w[1].1))
            || self.terms.iter().any(|&(i, j, q)| i > j || q == 0)
        {
            return Err(Error::Document(
                "terms must be strictly ordered, upper-triangular and non-zero".into(),
            ));
        }
        if let Some(v) = &self.variables {
            if v.n != self.n {
                return Err(Error::Document(format!(
                    "variable map covers {} variables, model has {}",
                    v.n, self.n
                )));
            }
        }
        let mut model = QuboModel::from_terms(self.n, self.terms, self.offset)?;
        model.penalties = self.penalties;
        Ok((model, self.variables))
    }
}

impl QuboModel {
    pub fn export(&self, vmap: Option<&VariableMap>, format: QuboFormat) -> Result<String> {
        match format {
            QuboFormat::CoordinateText => Ok(self.to_coordinate_text()),
            QuboFormat::Document => {
                let mut s = serde_json::to_string_pretty(&QuboDocument::new(self, vmap))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("n {} {} {}\n", self.n, self.num_terms(), self.offset);
        for (i, j, q) in self.terms() {
            out.push_str(&format!("{i} {j} {q}\n"));
        }
        out
    }

    pub fn from_coordinate_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split(' ').collect();
        let (n, count, offset) = match fields.as_slice() {
            ["n", n, count, offset] => (
                parse_num::<usize>(n, 1)?,
                parse_num::<usize>(count, 1)?,
                parse_num::<i64>(offset, 1)?,
            ),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("bad header {header:?}"),
                })
            }
        };
        let mut terms = Vec::with_capacity(count);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let parts: Vec<&str> = line.split(' ').collect();
            let [i, j, q] = parts.as_slice() else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `i j q`, got {line:?}"),
                });
            };
            terms.push((
                parse_num::<usize>(i, line_no)?,
                parse_num::<usize>(j, line_no)?,
                parse_num::<i64>(q, line_no)?,
            ));
        }
        if terms.len() != count {
            return Err(Error::Document(format!(
                "header declares {count} terms, found {}",
                terms.len()
            )));
        }
        QuboDocument {
            n,
            offset,
            penalties: None,
            variables: None,
            terms,
        }
        .into_model()
        .map(|(m, _)| m)
    }

    pub fn from_document(text: &str) -> Result<(Self, Option<VariableMap>)> {
        serde_json::from_str::<QuboDocument>(text)?.into_model()
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid integer {s:?}"),
    })
}
