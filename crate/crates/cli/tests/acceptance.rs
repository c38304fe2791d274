//! Acceptance criteria 1-8. Each criterion prints one PASS/FAIL line;
//! run with `--nocapture` to see them.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rowq_cli::args::{Cli, Command, SolveArgs};
use rowq_cli::{cmd_estimate, parse_input, solve_loaded, DEFAULT_SEED};
use rowq_core::qaoa::{self, evolve, expectation, norm_sqr, CostSpectrum, QaoaParams, QaoaResult, Strategy};
use rowq_core::qubo::{build_qubo, encode_selection, spins_from_bits};
use rowq_core::samplers::{sample_annealing, solve_brute_force, AnnealSchedule, SampleSet};
use rowq_core::trace::count_row_misses;
use rowq_core::{
    AddressTrace, GroundSetPolicy, MinKUnionInstance, QuboModel, RowBitSelection, SolutionReport, ToggleSets,
    TraceFormat,
};

const EXAMPLE_TRACE: &str = "10001\n00011\n00110\n01101\n01111\n01101\n11000\n11001\n10101\n";

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn example_instance() -> MinKUnionInstance {
    let trace = AddressTrace::parse(EXAMPLE_TRACE, TraceFormat::Binary).unwrap();
    MinKUnionInstance::from_toggle_sets(&ToggleSets::compute(&trace), 3, GroundSetPolicy::default()).unwrap()
}

fn criterion_1() -> Outcome {
    let trace = AddressTrace::parse(EXAMPLE_TRACE, TraceFormat::Binary).map_err(|e| e.to_string())?;
    let sets = ToggleSets::compute(&trace);
    let expected: Vec<Vec<usize>> = vec![vec![1, 6], vec![3, 8], vec![2, 6, 8], vec![1, 3, 4, 5], vec![2, 3, 6, 7]];
    check(sets.sets() == expected.as_slice(), format!("got {:?}", sets.sets()))?;
    Ok("M_0..M_4 exact".into())
}

fn criterion_2() -> Outcome {
    let inst = example_instance();
    let all = inst.solve_exact(true).map_err(|e| e.to_string())?;
    let optima: Vec<Vec<usize>> = all.iter().map(|s| s.indices.clone()).collect();
    check(all.iter().all(|s| s.objective == 5), "objective is not 5")?;
    check(optima == vec![vec![0, 1, 2], vec![1, 2, 4]], format!("optima {optima:?}"))?;
    // Census over all ten 3-subsets, computed independently.
    let mut census = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                let u: BTreeSet<usize> = [a, b, c].iter().flat_map(|&j| inst.sets()[j].iter().copied()).collect();
                census.push((u.len(), vec![a, b, c]));
            }
        }
    }
    let best = census.iter().map(|c| c.0).min().unwrap();
    let argmin: Vec<_> = census.into_iter().filter(|c| c.0 == best).map(|c| c.1).collect();
    check(best == 5 && argmin == optima, "census disagrees")?;
    Ok("objective 5, optima {0,1,2} and {1,2,4}".into())
}

fn criterion_3() -> Outcome {
    let inst = example_instance();
    let (model, vmap) = build_qubo(&inst, None).map_err(|e| e.to_string())?;
    let result = solve_brute_force(&model).map_err(|e| e.to_string())?;
    check(result.min_energy == 5, format!("minimum energy {}", result.min_energy))?;
    // Independent scan of all 2^13 assignments.
    let mut min = i64::MAX;
    let mut minimizers = Vec::new();
    for b in 0u32..1 << 13 {
        let bits: Vec<bool> = (0..13).map(|i| b >> i & 1 == 1).collect();
        let e = model.energy(&bits).unwrap();
        if e < min {
            min = e;
            minimizers.clear();
        }
        if e == min {
            minimizers.push(bits);
        }
    }
    minimizers.sort();
    check(min == 5 && minimizers == result.minimizers, "exhaustive scan disagrees")?;
    for bits in &minimizers {
        let r = SolutionReport::decode(&model, &vmap, &inst, bits).map_err(|e| e.to_string())?;
        check(r.exactly_k && r.y_consistent && r.objective == 5, format!("minimizer {} decodes badly", r.assignment))?;
        let expected = encode_selection(&inst, &vmap, &r.chosen).map_err(|e| e.to_string())?;
        check(&expected == bits, "y-indicators are not exact")?;
    }
    Ok(format!("min energy 5, {} minimizers all feasible and optimal", minimizers.len()))
}

fn solve_args(k: usize) -> SolveArgs {
    let k = k.to_string();
    match Cli::parse_from(["rowq", "solve", "--input", "generated", "--k", &k]).command {
        Command::Solve(a) => a,
        _ => unreachable!(),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut cases = 0;
    for t in 0..200 {
        let width = rng.gen_range(1..=10);
        let len = rng.gen_range(2..=40);
        let density: f64 = rng.gen_range(0.05..0.6);
        let mut row: Vec<bool> = (0..width).map(|_| rng.gen()).collect();
        let mut text = String::new();
        for _ in 0..len {
            text.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            text.push('\n');
            for bit in row.iter_mut() {
                if rng.gen_bool(density) {
                    *bit = !*bit;
                }
            }
        }
        for k in 0..=width.min(4) {
            let args = solve_args(k);
            let loaded = parse_input(&text, &args.input).map_err(|e| format!("trace {t}: {e}"))?;
            let outcome = solve_loaded(&loaded, &args).map_err(|e| format!("trace {t} k={k}: {e}"))?;
            let exact = loaded.instance.solve_exact(false).map_err(|e| e.to_string())?[0].objective;
            let r = &outcome.report;
            let selection = RowBitSelection::new(r.chosen.iter().copied());
            let misses = count_row_misses(loaded.trace.as_ref().unwrap(), &selection).map_err(|e| e.to_string())?;
            check(
                r.exactly_k && r.energy == exact as i64 && r.objective == exact && misses == exact,
                format!("trace {t} k={k}: energy {} exact {exact} misses {misses}", r.energy),
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (trace, k) cases agree"))
}

fn criterion_5() -> Outcome {
    let inst = example_instance();
    let (model, _) = build_qubo(&inst, None).map_err(|e| e.to_string())?;
    let schedule = AnnealSchedule::default_for(&model);
    let mut good = 0;
    let mut worst = usize::MAX;
    for seed in 0..100u64 {
        let set = sample_annealing(&model, 100, &schedule, seed).map_err(|e| e.to_string())?;
        set.check(&model).map_err(|e| e.to_string())?;
        let hits: usize = set.records.iter().filter(|r| r.energy == 5).map(|r| r.occurrences).sum();
        worst = worst.min(hits);
        if hits >= 5 {
            good += 1;
        }
    }
    check(good >= 95, format!("only {good}/100 seeds reached 5 hits"))?;
    Ok(format!("{good}/100 seeds with >= 5 optimal reads (fewest hits {worst})"))
}

fn criterion_6() -> Outcome {
    let inst = example_instance();
    let (model, vmap) = build_qubo(&inst, None).map_err(|e| e.to_string())?;
    let spectrum = CostSpectrum::from_model(&model).map_err(|e| e.to_string())?;
    let mean = spectrum.mean();
    let result = qaoa::optimize(&spectrum, 1, &Strategy::default(), DEFAULT_SEED).map_err(|e| e.to_string())?;
    check(result.expectation < mean, format!("expectation {} not below {mean}", result.expectation))?;
    check(result.samples.num_reads == 1024, "expected 1024 shots")?;
    let mut optimal_shots = 0;
    for rec in &result.samples.records {
        let r = SolutionReport::decode(&model, &vmap, &inst, &rec.assignment).map_err(|e| e.to_string())?;
        if r.exactly_k && r.objective == 5 {
            optimal_shots += rec.occurrences;
        }
    }
    check(optimal_shots > 0, "no shot decodes to an optimal selection")?;
    Ok(format!(
        "<E> = {:.3} < {mean}, {optimal_shots}/1024 shots decode to objective 5 (seed {DEFAULT_SEED})",
        result.expectation
    ))
}

fn criterion_7() -> Outcome {
    let rows = [
        ("filter7", 524288, 19, 524307),
        ("rot6", 65536, 16, 65552),
        ("rot3d7", 2097152, 21, 2097173),
        ("NN8", 356400, 22, 356422),
    ];
    for (name, elements, sets, qubits) in rows {
        let est = cmd_estimate(Some(name), elements, sets);
        check(est.qubits == qubits, format!("{name}: {} != {qubits}", est.qubits))?;
    }
    Ok("all four rows exact".into())
}

fn random_model(rng: &mut ChaCha8Rng, n: usize, density: f64) -> QuboModel {
    let mut q = QuboModel::new(n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                q.add(i, j, rng.gen_range(-9..=9)).unwrap();
            }
        }
    }
    q
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = example_instance();
    let (example, vmap) = build_qubo(&inst, None).map_err(|e| e.to_string())?;

    // Norm preservation and zero-angle identity.
    let spectrum = CostSpectrum::from_model(&example).map_err(|e| e.to_string())?;
    for p in 1..=3 {
        let gammas: Vec<f64> = (0..p).map(|_| rng.gen_range(-PI..PI)).collect();
        let betas: Vec<f64> = (0..p).map(|_| rng.gen_range(-PI..PI)).collect();
        let state = evolve(&spectrum, &QaoaParams::new(gammas, betas).unwrap()).unwrap();
        check((norm_sqr(&state) - 1.0).abs() < 1e-12, format!("norm drift at p={p}"))?;
        let uniform = evolve(&spectrum, &QaoaParams::zeros(p)).unwrap();
        let e = expectation(&spectrum, &uniform).unwrap();
        check((e - 51.25).abs() < 1e-9, format!("zero angles give {e}"))?;
    }

    // Ising/QUBO spectra, exhaustive for n <= 16.
    for n in [1, 5, 13, 16] {
        let q = if n == 13 { example.clone() } else { random_model(&mut rng, n, 0.4) };
        let ising = q.to_ising();
        for b in 0u32..1 << n {
            let bits: Vec<bool> = (0..n).map(|i| b >> i & 1 == 1).collect();
            let e = ising.energy(&spins_from_bits(&bits)).unwrap();
            check(e == q.energy(&bits).unwrap() as f64, format!("Ising mismatch at n={n}"))?;
        }
    }

    // Penalty sufficiency: every wrong-cardinality or inconsistent-y state
    // costs more than the optimum.
    for b in 0u32..1 << 13 {
        let bits: Vec<bool> = (0..13).map(|i| b >> i & 1 == 1).collect();
        let r = SolutionReport::decode(&example, &vmap, &inst, &bits).unwrap();
        if !r.exactly_k || !r.y_consistent {
            check(r.energy > 5, format!("infeasible {} has energy {}", r.assignment, r.energy))?;
        }
        if r.exactly_k && r.y_consistent {
            check(r.energy == r.objective as i64, "feasible energy differs from objective")?;
        }
    }

    // SampleSet integrity and document round-trips.
    let set = sample_annealing(&example, 64, &AnnealSchedule::default_for(&example).with_sweeps(50), 1).unwrap();
    set.check(&example).map_err(|e| e.to_string())?;
    let doc = set.to_document().unwrap();
    let back = SampleSet::from_document(&doc).map_err(|e| e.to_string())?;
    check(back == set && back.to_document().unwrap() == doc, "sample set round-trip")?;
    let strategy = Strategy { grid_points: 4, max_evals: 50, shots: 32, ..Strategy::default() };
    let qres = qaoa::optimize(&spectrum, 1, &strategy, 3).unwrap();
    let qdoc = qres.to_document().unwrap();
    check(QaoaResult::from_document(&qdoc).unwrap().to_document().unwrap() == qdoc, "QAOA round-trip")?;
    let text = example.to_coordinate_text();
    check(QuboModel::from_coordinate_text(&text).unwrap().to_coordinate_text() == text, "QUBO text round-trip")?;
    let jdoc = example.export(Some(&vmap), rowq_core::qubo::QuboFormat::Document).unwrap();
    let (m, v) = QuboModel::from_document(&jdoc).unwrap();
    check(m.export(v.as_ref(), rowq_core::qubo::QuboFormat::Document).unwrap() == jdoc, "QUBO document round-trip")?;
    let idoc = serde_json::to_string_pretty(&inst).unwrap();
    let inst2: MinKUnionInstance = serde_json::from_str(&idoc).unwrap();
    check(serde_json::to_string_pretty(&inst2).unwrap() == idoc, "instance round-trip")?;
    Ok("norm, zero-angle, spectra, penalties, integrity, round-trips".into())
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        (1, "extraction fidelity", criterion_1, Duration::from_secs(1)),
        (2, "optimal value", criterion_2, Duration::from_secs(1)),
        (3, "QUBO exactness", criterion_3, Duration::from_secs(10)),
        (4, "oracle equivalence sweep", criterion_4, Duration::from_secs(300)),
        (5, "annealing emulation", criterion_5, Duration::from_secs(30)),
        (6, "QAOA emulation", criterion_6, Duration::from_secs(120)),
        (7, "scaling table", criterion_7, Duration::from_secs(1)),
        (8, "property suites", criterion_8, Duration::from_secs(600)),
    ];
    let mut failures = Vec::new();
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}, but took {elapsed:.2?} (budget {budget:?})")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("PASS  #{id} {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                println!("FAIL  #{id} {name}: {why} [{elapsed:.2?}]");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
