//! Runs the `rowq` binary end to end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use clap::Parser;
use proptest::prelude::*;
use rowq_cli::args::{Cli, Command as Sub, SolveArgs};
use rowq_cli::{parse_input, solve_loaded};
use rowq_core::qaoa::QaoaResult;
use rowq_core::samplers::SampleSet;
use rowq_core::trace::count_row_misses;
use rowq_core::{MinKUnionInstance, QuboModel, RowBitSelection};
use tempfile::TempDir;

const EXAMPLE_TRACE: &str = "# nine addresses, five bits\n10001\n00011\n00110\n01101\n01111\n01101\n11000\n11001\n10101\n";
const EXAMPLE_HEX: &str = "0x11\n03\n06\n0D\n0f\n0d\n18\n19\n15\n";

fn rowq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rowq")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn extract_reports_example_sizes() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let out = rowq(&["extract", "--input", s(&trace), "--k", "3"]);
    let doc = stdout(&out);
    let inst: MinKUnionInstance = serde_json::from_str(&doc).unwrap();
    assert_eq!(inst.sets(), &[vec![1, 6], vec![3, 8], vec![2, 6, 8], vec![1, 3, 4, 5], vec![2, 3, 6, 7]]);
    assert_eq!(inst.k(), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("elements=8 sets=5 qubits=13"), "{stderr}");
}

#[test]
fn hex_trace_matches_binary_trace() {
    let dir = TempDir::new().unwrap();
    let bin = write(&dir, "t.txt", EXAMPLE_TRACE);
    let hex = write(&dir, "t.hex", EXAMPLE_HEX);
    let a = stdout(&rowq(&["extract", "--input", s(&bin), "--k", "3"]));
    let b = stdout(&rowq(&["extract", "--input", s(&hex), "--format", "hex", "--width", "5", "--k", "3"]));
    let strip = |d: &str| d.lines().filter(|l| !l.contains("source")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn stdin_input_is_accepted() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rowq"))
        .args(["extract", "--input", "-", "--k", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(EXAMPLE_TRACE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let inst: MinKUnionInstance = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(inst.k(), 2);
}

#[test]
fn instance_document_roundtrips_byte_identically() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let first = stdout(&rowq(&["extract", "--input", s(&trace), "--k", "3"]));
    let doc = write(&dir, "inst.json", &first);
    let second = stdout(&rowq(&["extract", "--input", s(&doc)]));
    assert_eq!(first, second);
    // --k overrides the document's k.
    let third = stdout(&rowq(&["extract", "--input", s(&doc), "--k", "2"]));
    assert!(third.contains("\"k\": 2"));
}

#[test]
fn qubo_exports_roundtrip() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let json = stdout(&rowq(&["build-qubo", "--input", s(&trace), "--k", "3"]));
    let (model, vmap) = QuboModel::from_document(&json).unwrap();
    assert_eq!(model.export(vmap.as_ref(), rowq_core::qubo::QuboFormat::Document).unwrap(), json);

    let text = stdout(&rowq(&["build-qubo", "--input", s(&trace), "--k", "3", "--emit", "text"]));
    assert!(text.starts_with("n 13 38 81\n"));
    assert_eq!(QuboModel::from_coordinate_text(&text).unwrap().to_coordinate_text(), text);
    assert_eq!(model.to_coordinate_text(), text);

    let custom = stdout(&rowq(&["build-qubo", "--input", s(&trace), "--k", "3", "--emit", "text", "--penalties", "20,20,2"]));
    assert!(custom.starts_with("n 13 38 180\n"));
}

#[test]
fn brute_force_solve_on_example() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let samples = dir.path().join("min.json");
    let report: serde_json::Value =
        serde_json::from_str(&stdout(&rowq(&["solve", "--input", s(&trace), "--k", "3", "--samples-out", s(&samples)])))
            .unwrap();
    assert_eq!(report["backend"], "brute-force");
    assert_eq!(report["energy"], 5);
    assert_eq!(report["objective"], 5);
    assert_eq!(report["row_misses"], 5);
    assert_eq!(report["exactly_k"], true);
    let set = SampleSet::from_document(&std::fs::read_to_string(&samples).unwrap()).unwrap();
    assert_eq!(set.records.len(), 2);
    assert!(set.records.iter().all(|r| r.energy == 5 && r.occurrences == 1));
}

#[test]
fn annealing_pipeline_and_report() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let samples = dir.path().join("sa.json");
    let report_path = dir.path().join("report.json");
    let out = rowq(&[
        "solve", "--input", s(&trace), "--k", "3", "--backend", "sa", "--seed", "3",
        "--out", s(&report_path), "--samples-out", s(&samples),
    ]);
    assert!(stdout(&out).is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["seed"], 3);
    assert_eq!(report["objective"], 5);

    let doc = std::fs::read_to_string(&samples).unwrap();
    let set = SampleSet::from_document(&doc).unwrap();
    assert_eq!(set.to_document().unwrap(), doc);
    assert_eq!(set.num_reads, 100);

    let out = rowq(&["report", "--input", s(&samples)]);
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("energy,occurrences,distinct"));
    assert!(lines.next().unwrap().starts_with("5,"));
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("best=5,") && summary.contains("distinct optimal="), "{summary}");
}

#[test]
fn report_of_two_optima_names_both() {
    let dir = TempDir::new().unwrap();
    let doc = r#"{
  "backend": "simulated-annealing",
  "seed": 1,
  "num_reads": 15,
  "records": [
    {"assignment": "0110101100111", "energy": 5, "occurrences": 5},
    {"assignment": "1110011100101", "energy": 5, "occurrences": 6},
    {"assignment": "1110011110101", "energy": 6, "occurrences": 4}
  ]
}"#;
    let path = write(&dir, "s.json", doc);
    let out = rowq(&["report", "--input", s(&path)]);
    assert_eq!(stdout(&out), "energy,occurrences,distinct\n5,11,2\n6,4,1\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("best=5, occurrences=11, distinct optimal=2"));
}

#[test]
fn qaoa_document_roundtrips_and_reports() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "i.json", r#"{"ground_set":[1,2,3],"sets":[[1],[1,2],[2,3]],"k":2}"#);
    let qaoa = dir.path().join("q.json");
    let report: serde_json::Value = serde_json::from_str(&stdout(&rowq(&[
        "solve", "--input", s(&inst), "--backend", "qaoa", "--shots", "256", "--samples-out", s(&qaoa),
    ])))
    .unwrap();
    assert_eq!(report["backend"], "qaoa-statevector");
    assert_eq!(report["objective"], 2);
    assert_eq!(report["chosen"], serde_json::json!([0, 1]));
    let doc = std::fs::read_to_string(&qaoa).unwrap();
    assert_eq!(QaoaResult::from_document(&doc).unwrap().to_document().unwrap(), doc);
    let csv = stdout(&rowq(&["report", "--input", s(&qaoa)]));
    assert!(csv.starts_with("energy,occurrences,distinct\n"));
}

#[test]
fn estimate_from_counts_and_trace() {
    let out = rowq(&["estimate", "--name", "filter7", "--elements", "524288", "--sets", "19"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["qubits"], 524307);
    assert_eq!(v["benchmark"], "filter7");

    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&rowq(&["estimate", "--input", s(&trace), "--k", "3"]))).unwrap();
    assert_eq!(v["qubits"], 13);
    assert_eq!(code(&rowq(&["estimate"])), 2);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let trace = write(&dir, "t.txt", EXAMPLE_TRACE);
    let empty = write(&dir, "empty.txt", "# nothing\n\n");
    let ragged = write(&dir, "ragged.txt", "101\n10\n");
    let missing = dir.path().join("missing.txt");

    assert_eq!(code(&rowq(&["extract", "--input", s(&missing), "--k", "1"])), 1);
    assert_eq!(code(&rowq(&["extract", "--input", s(&trace), "--k", "6"])), 2);
    assert_eq!(code(&rowq(&["extract", "--input", s(&trace)])), 2);
    assert_eq!(code(&rowq(&["extract", "--input", s(&trace), "--k", "2", "--format", "hex"])), 2);
    assert_eq!(code(&rowq(&["solve", "--input", s(&trace), "--k", "2", "--reads", "0", "--backend", "sa"])), 2);
    assert_eq!(code(&rowq(&["build-qubo", "--input", s(&trace), "--k", "2", "--penalties", "9,8,1"])), 2);
    assert_eq!(code(&rowq(&["bogus"])), 2);
    assert_eq!(code(&rowq(&["extract", "--input", s(&empty), "--k", "1"])), 3);
    let out = rowq(&["extract", "--input", s(&ragged), "--k", "1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged.txt"));
    let bad_doc = write(&dir, "bad.json", "{\"sets\": 3}");
    assert_eq!(code(&rowq(&["report", "--input", s(&bad_doc)])), 3);

    let sets: Vec<String> = (0..30).map(|i| format!("[{}]", i % 7 + 1)).collect();
    let big = write(
        &dir,
        "big.json",
        &format!("{{\"ground_set\":[1,2,3,4,5,6,7],\"sets\":[{}],\"k\":15}}", sets.join(",")),
    );
    assert_eq!(code(&rowq(&["solve", "--input", s(&big)])), 4);
    assert_eq!(code(&rowq(&["solve", "--input", s(&big), "--backend", "qaoa"])), 4);
}

#[test]
fn infeasible_anneal_exits_six_after_writing_outputs() {
    let dir = TempDir::new().unwrap();
    let sets: Vec<String> = (0..30)
        .map(|i| {
            let (a, b) = (i % 7 + 1, (i * 3) % 11 + 1);
            if a == b { format!("[{a}]") } else { format!("[{},{}]", a.min(b), a.max(b)) }
        })
        .collect();
    let big = write(
        &dir,
        "big.json",
        &format!("{{\"ground_set\":[1,2,3,4,5,6,7,8,9,10,11],\"sets\":[{}],\"k\":15}}", sets.join(",")),
    );
    let report = dir.path().join("r.json");
    let out = rowq(&[
        "solve", "--input", s(&big), "--backend", "sa", "--reads", "1", "--sweeps", "1", "--seed", "2",
        "--out", s(&report),
    ]);
    assert_eq!(code(&out), 6);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["exactly_k"], false);
}

fn solve_args(extra: &[&str]) -> SolveArgs {
    let argv = ["rowq", "solve", "--input", "mem"].iter().chain(extra).copied();
    match Cli::parse_from(argv).command {
        Sub::Solve(a) => a,
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Brute-force QUBO optimum, exact Min-k-Union optimum and simulated row
    /// misses of the decoded bits all agree.
    #[test]
    fn end_to_end_identity(
        rows in (1usize..=6).prop_flat_map(|w| prop::collection::vec(prop::collection::vec(any::<bool>(), w), 2..16)),
        k_frac in 0.0f64..1.0,
    ) {
        let w = rows[0].len();
        let k = ((w as f64 + 1.0) * k_frac) as usize;
        let text: String = rows.iter().map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>() + "\n").collect();
        let k_arg = k.to_string();
        let args = solve_args(&["--k", &k_arg]);
        let loaded = parse_input(&text, &args.input).unwrap();
        let outcome = solve_loaded(&loaded, &args).unwrap();
        let exact = loaded.instance.solve_exact(false).unwrap()[0].objective;
        let r = &outcome.report;
        prop_assert!(r.exactly_k && r.y_consistent);
        prop_assert_eq!(r.objective, exact);
        prop_assert_eq!(r.energy, exact as i64);
        let misses = count_row_misses(loaded.trace.as_ref().unwrap(), &RowBitSelection::new(r.chosen.iter().copied())).unwrap();
        prop_assert_eq!(r.row_misses, Some(misses));
        prop_assert_eq!(misses, exact);
    }
}
