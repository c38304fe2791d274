//! The `rowq` command pipeline: extract, build-qubo, solve, estimate, report.
//!
//! Each `cmd_*` function is pure with respect to the filesystem except for
//! reading its input; [`run`] does the writing. Machine outputs are JSON
//! documents (pretty-printed, `\n`-terminated) or CSV.

pub mod args;
pub mod error;

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rowq_core::qaoa::{self, CostSpectrum, QaoaResult, Strategy};
use rowq_core::qubo::{build_qubo, QuboFormat};
use rowq_core::samplers::{sample_annealing, solve_brute_force, AnnealSchedule, SampleSet};
use rowq_core::trace::count_row_misses;
use rowq_core::{
    AddressTrace, MinKUnionInstance, Penalties, RowBitSelection, SolutionReport, ToggleSets, TraceFormat,
};
use serde::{Deserialize, Serialize};

use args::{Backend, Cli, Command, InputArgs, QuboEmit, SolveArgs, TraceFormatArg};
pub use error::CliError;

/// Seed used when `--seed` is not given. Recorded in every output document.
pub const DEFAULT_SEED: u64 = 42;

pub type CliResult<T> = Result<T, CliError>;

/// An instance plus the trace it came from, when there is one.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub instance: MinKUnionInstance,
    pub trace: Option<AddressTrace>,
}

fn read_text(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Reads an instance document (anything starting with `{`) or a trace.
pub fn load_input(args: &InputArgs) -> CliResult<LoadedInput> {
    let text = read_text(&args.input)?;
    parse_input(&text, args)
}

pub fn parse_input(text: &str, args: &InputArgs) -> CliResult<LoadedInput> {
    if text.trim_start().starts_with('{') {
        let instance: MinKUnionInstance =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display())))?;
        let instance = match args.k {
            Some(k) => instance.with_k(k)?,
            None => instance,
        };
        return Ok(LoadedInput {
            instance,
            trace: None,
        });
    }
    let format = match (args.format, args.width) {
        (TraceFormatArg::Bin, _) => TraceFormat::Binary,
        (TraceFormatArg::Hex, Some(width)) if width > 0 => TraceFormat::Hex { width },
        (TraceFormatArg::Hex, _) => {
            return Err(CliError::Usage("--format hex needs a positive --width".into()))
        }
    };
    let source = args.input.display().to_string();
    let trace = AddressTrace::parse_with_source(text, format, &source)
        .map_err(|e| CliError::in_file(e, &args.input))?;
    let k = args
        .k
        .ok_or_else(|| CliError::Usage("--k is required when the input is a trace".into()))?;
    let toggles = ToggleSets::compute(&trace);
    let instance = MinKUnionInstance::from_toggle_sets(&toggles, k, args.ground_set.into()).map_err(|e| {
        CliError::Usage(format!(
            "{e}: a {}-bit trace offers only {} candidate row bits",
            trace.width(),
            trace.width()
        ))
    })?;
    Ok(LoadedInput {
        instance,
        trace: Some(trace),
    })
}

/// Qubits needed for the QUBO: one per element plus one per set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitEstimate {
    pub benchmark: Option<String>,
    pub elements: usize,
    pub sets: usize,
    pub qubits: usize,
}

impl fmt::Display for QubitEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.benchmark {
            write!(f, "{name}: ")?;
        }
        write!(
            f,
            "elements={} sets={} qubits={}",
            self.elements, self.sets, self.qubits
        )
    }
}

pub fn cmd_estimate(benchmark: Option<&str>, elements: usize, sets: usize) -> QubitEstimate {
    QubitEstimate {
        benchmark: benchmark.map(str::to_string),
        elements,
        sets,
        qubits: elements + sets,
    }
}

/// Returns the instance and its size summary.
pub fn cmd_extract(args: &InputArgs) -> CliResult<(MinKUnionInstance, QubitEstimate)> {
    let loaded = load_input(args)?;
    let estimate = cmd_estimate(
        None,
        loaded.instance.num_elements(),
        loaded.instance.num_sets(),
    );
    Ok((loaded.instance, estimate))
}

pub fn cmd_build_qubo(args: &InputArgs, penalties: Option<Penalties>, emit: QuboEmit) -> CliResult<String> {
    let loaded = load_input(args)?;
    let (model, vmap) = build_qubo(&loaded.instance, penalties)?;
    let format = match emit {
        QuboEmit::Json => QuboFormat::Document,
        QuboEmit::Text => QuboFormat::CoordinateText,
    };
    Ok(model.export(Some(&vmap), format)?)
}

/// Everything a solve run produces.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub report: SolutionReport,
    /// Brute force reports its minimizers here, one occurrence each.
    pub samples: Option<SampleSet>,
    pub qaoa: Option<QaoaResult>,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        self.report.is_feasible()
    }
}

pub fn validate_solve_args(args: &SolveArgs) -> CliResult<()> {
    let positive = [
        ("--reads", args.reads),
        ("--sweeps", args.sweeps),
        ("--p", args.p),
        ("--shots", args.shots),
    ];
    for (flag, value) in positive {
        if value == 0 {
            return Err(CliError::Usage(format!("{flag} must be at least 1")));
        }
    }
    Ok(())
}

/// Builds the QUBO, runs the backend, decodes the best candidate and checks it
/// against the row-buffer model when a trace is available.
///
/// Candidates are ranked by decoded feasibility, then decoded objective, then
/// energy. An infeasible result is returned, not raised.
pub fn cmd_solve(args: &SolveArgs) -> CliResult<SolveOutcome> {
    validate_solve_args(args)?;
    let loaded = load_input(&args.input)?;
    solve_loaded(&loaded, args)
}

pub fn solve_loaded(loaded: &LoadedInput, args: &SolveArgs) -> CliResult<SolveOutcome> {
    validate_solve_args(args)?;
    let inst = &loaded.instance;
    let (model, vmap) = build_qubo(inst, args.penalties)?;

    let (candidates, samples, qaoa_result, seed) = match args.backend {
        Backend::Brute => {
            let result = solve_brute_force(&model)?;
            let set = SampleSet::from_reads(&model, result.minimizers.iter().cloned(), args.backend.name(), None)?;
            (result.minimizers, Some(set), None, None)
        }
        Backend::Sa => {
            let schedule = AnnealSchedule::default_for(&model).with_sweeps(args.sweeps);
            let set = sample_annealing(&model, args.reads, &schedule, args.seed)?;
            let candidates = set.records.iter().map(|r| r.assignment.clone()).collect();
            (candidates, Some(set), None, Some(args.seed))
        }
        Backend::Qaoa => {
            let spectrum = CostSpectrum::from_model(&model)?;
            let strategy = Strategy {
                shots: args.shots,
                ..Strategy::default()
            };
            let result = qaoa::optimize(&spectrum, args.p, &strategy, args.seed)?;
            result.samples.check(&model)?;
            let candidates = result.samples.records.iter().map(|r| r.assignment.clone()).collect();
            (candidates, Some(result.samples.clone()), Some(result), Some(args.seed))
        }
    };

    let mut best: Option<SolutionReport> = None;
    for bits in &candidates {
        let report = SolutionReport::decode(&model, &vmap, inst, bits)?;
        let key = |r: &SolutionReport| (!r.exactly_k, r.objective, r.energy);
        if best.as_ref().is_none_or(|b| key(&report) < key(b)) {
            best = Some(report);
        }
    }
    let mut report = best
        .ok_or_else(|| CliError::Integrity("backend returned no candidates".into()))?
        .with_backend(args.backend.name(), seed);

    if report.energy_identity == Some(false) {
        return Err(CliError::Integrity(format!(
            "feasible assignment has energy {} but objective {}",
            report.energy, report.objective
        )));
    }
    if let Some(trace) = &loaded.trace {
        let selection = RowBitSelection::new(report.chosen.iter().copied());
        let misses = count_row_misses(trace, &selection)?;
        if misses != report.objective {
            return Err(CliError::Integrity(format!(
                "decoded objective {} disagrees with {misses} row misses for row bits {selection}",
                report.objective
            )));
        }
        report.row_misses = Some(misses);
    }

    Ok(SolveOutcome {
        report,
        samples,
        qaoa: qaoa_result,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSummary {
    pub best_energy: Option<i64>,
    /// Reads at the best energy.
    pub occurrences: usize,
    pub distinct_optimal: usize,
    pub num_reads: usize,
}

impl fmt::Display for ReportSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.best_energy {
            Some(e) => write!(
                f,
                "best={e}, occurrences={}, distinct optimal={}, reads={}",
                self.occurrences, self.distinct_optimal, self.num_reads
            ),
            None => write!(f, "no samples"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOutput {
    pub csv: String,
    pub summary: ReportSummary,
}

/// Accepts a sample-set document or a QAOA result document.
pub fn cmd_report(text: &str) -> CliResult<ReportOutput> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let samples = if value.get("samples").is_some() {
        QaoaResult::from_document(text)?.samples
    } else {
        SampleSet::from_document(text)?
    };
    let hist = samples.histogram();
    let summary = match hist.first() {
        Some(row) => ReportSummary {
            best_energy: Some(row.energy),
            occurrences: row.occurrences,
            distinct_optimal: row.distinct,
            num_reads: samples.num_reads,
        },
        None => ReportSummary {
            best_energy: None,
            occurrences: 0,
            distinct_optimal: 0,
            num_reads: samples.num_reads,
        },
    };
    Ok(ReportOutput {
        csv: samples.histogram_csv(),
        summary,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_document<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Executes one parsed command line. Summaries go to standard error.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Extract { input, out } => {
            let (instance, estimate) = cmd_extract(&input)?;
            write_output(out.as_deref(), &to_document(&instance)?)?;
            eprintln!("k={} {estimate}", instance.k());
        }
        Command::BuildQubo {
            input,
            penalties,
            emit,
            out,
        } => {
            let content = cmd_build_qubo(&input, penalties, emit)?;
            write_output(out.as_deref(), &content)?;
        }
        Command::Solve(args) => {
            let outcome = cmd_solve(&args)?;
            write_output(args.out.as_deref(), &to_document(&outcome.report)?)?;
            if let Some(path) = &args.samples_out {
                let doc = match (&outcome.qaoa, &outcome.samples) {
                    (Some(q), _) => q.to_document()?,
                    (None, Some(s)) => s.to_document()?,
                    (None, None) => unreachable!("every backend yields samples"),
                };
                write_output(Some(path), &doc)?;
            }
            let r = &outcome.report;
            eprintln!(
                "backend={} chosen={:?} objective={} energy={} row_misses={} feasible={}",
                args.backend.name(),
                r.chosen,
                r.objective,
                r.energy,
                r.row_misses.map_or("n/a".to_string(), |m| m.to_string()),
                r.exactly_k
            );
            if !outcome.is_feasible() {
                return Err(CliError::Infeasible(format!(
                    "no candidate selects exactly k sets (best selects {})",
                    r.chosen.len()
                )));
            }
        }
        Command::Estimate {
            name,
            elements,
            sets,
            input,
            out,
        } => {
            let estimate = match (elements, sets, input.into_input()) {
                (Some(e), Some(s), _) => cmd_estimate(name.as_deref(), e, s),
                (_, _, Some(input)) => {
                    let (_, mut est) = cmd_extract(&input)?;
                    est.benchmark = name;
                    est
                }
                _ => {
                    return Err(CliError::Usage(
                        "estimate needs --elements and --sets, or --input with --k".into(),
                    ))
                }
            };
            write_output(out.as_deref(), &to_document(&estimate)?)?;
            eprintln!("{estimate}");
        }
        Command::Report { input, out } => {
            let text = read_text(&input)?;
            let report = cmd_report(&text).map_err(|e| match e {
                CliError::Parse(m) => CliError::Parse(format!("{}: {m}", input.display())),
                other => other,
            })?;
            write_output(out.as_deref(), &report.csv)?;
            eprintln!("{}", report.summary);
        }
    }
    Ok(())
}
