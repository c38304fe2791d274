//! Row-bit selection for DRAM address mapping, phrased as Min-k-Union and
//! compiled into an exact QUBO.
//!
//! The pipeline is:
//!
//! 1. [`trace`] parses an address trace and derives one toggle set per bit.
//! 2. [`minkunion`] holds the combinatorial instance and its classical solvers.
//! 3. [`qubo`] compiles the instance into an integer QUBO, evaluates and
//!    decodes assignments, and converts to Ising form.
//! 4. [`samplers`] and [`qaoa`] minimize the QUBO, classically or by
//!    simulating the gate-based QAOA circuit.
//!
//! Every decoded solution can be checked against [`trace::count_row_misses`],
//! which walks the trace with a row buffer and never looks at toggle sets.

pub mod error;
pub mod minkunion;
pub mod qaoa;
pub mod qubo;
pub mod samplers;
pub mod trace;

pub use error::{Error, Result};
pub use minkunion::{GroundSetPolicy, MinKUnionInstance, Selection};
pub use qubo::{IsingModel, Penalties, QuboModel, SolutionReport, VariableMap};
pub use samplers::{AnnealSchedule, SampleRecord, SampleSet};
pub use trace::{AddressTrace, RowBitSelection, ToggleSets, TraceFormat};
