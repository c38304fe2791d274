use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rowq_core::{GroundSetPolicy, Penalties};

use crate::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "rowq", version, about = "Row-bit selection for DRAM address mapping via Min-k-Union QUBOs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Min-k-Union instance from an address trace.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile an instance (or trace) into its QUBO.
    BuildQubo {
        #[command(flatten)]
        input: InputArgs,
        /// Penalty weights `A,B,C` (default `|V|+1,|V|+1,1`).
        #[arg(long, value_parser = parse_penalties)]
        penalties: Option<Penalties>,
        #[arg(long, value_enum, default_value_t = QuboEmit::Json)]
        emit: QuboEmit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve, decode and verify against the row-buffer model.
    Solve(SolveArgs),
    /// Qubits needed for an instance: elements + sets.
    Estimate {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, requires = "sets", conflicts_with = "input")]
        elements: Option<usize>,
        #[arg(long, requires = "elements", conflicts_with = "input")]
        sets: Option<usize>,
        #[command(flatten)]
        input: OptionalInputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram CSV and summary from a sample-set document.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Trace file or instance document; `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = TraceFormatArg::Bin)]
    pub format: TraceFormatArg,
    /// Address width in bits (hex traces only).
    #[arg(long)]
    pub width: Option<usize>,
    /// Number of row bits to select.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "ground-set", value_enum, default_value_t = GroundSetArg::Union)]
    pub ground_set: GroundSetArg,
}

#[derive(Debug, Clone, Args)]
pub struct OptionalInputArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceFormatArg::Bin)]
    pub format: TraceFormatArg,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "ground-set", value_enum, default_value_t = GroundSetArg::Union)]
    pub ground_set: GroundSetArg,
}

impl OptionalInputArgs {
    pub fn into_input(self) -> Option<InputArgs> {
        Some(InputArgs {
            input: self.input?,
            format: self.format,
            width: self.width,
            k: self.k,
            ground_set: self.ground_set,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_penalties)]
    pub penalties: Option<Penalties>,
    #[arg(long, value_enum, default_value_t = Backend::Brute)]
    pub backend: Backend,
    /// Annealing reads.
    #[arg(long, default_value_t = 100)]
    pub reads: usize,
    /// Metropolis sweeps per read.
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    /// QAOA layers.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Measurements drawn from the optimized QAOA state.
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Solution report destination (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sample-set (annealing) or QAOA result document destination.
    #[arg(long)]
    pub samples_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormatArg {
    Bin,
    Hex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroundSetArg {
    Union,
    All,
}

impl From<GroundSetArg> for GroundSetPolicy {
    fn from(arg: GroundSetArg) -> Self {
        match arg {
            GroundSetArg::Union => GroundSetPolicy::UnionOfSets,
            GroundSetArg::All => GroundSetPolicy::AllTransitions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Brute,
    Sa,
    Qaoa,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Brute => "brute-force",
            Backend::Sa => "simulated-annealing",
            Backend::Qaoa => "qaoa-statevector",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuboEmit {
    /// Structured JSON document with penalties and variable map.
    Json,
    /// `n <vars> <terms> <offset>` header plus `i j q` lines.
    Text,
}

fn parse_penalties(s: &str) -> Result<Penalties, String> {
    s.parse().map_err(|e: rowq_core::Error| e.to_string())
}
