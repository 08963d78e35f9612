//! Executes a validated config and writes CSV data plus JSON summaries
//! into the output directory. Rows are ordered deterministically, so a
//! rerun with the same seeds reproduces the files byte for byte.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use lcl_core::algorithms::{
    greedy_coloring, linial_coloring, luby_mis, two_color_adversary, AdversaryOutcome,
    ConstantLabel, IdParityTwoColoring, LinialColoring,
};
use lcl_core::bridge;
use lcl_core::engine::{
    estimate_failure, run, IdAssignment, LocalAlgorithm, PayloadSource, RandomizedView,
};
use lcl_core::graph::Graph;
use lcl_core::problems::LclProblem;
use lcl_core::rotation::{check_rotation, rotation_coloring, OrbitSegment};
use lcl_core::shift::{
    check_window_rule, sample_aperiodic, window_rule_from_algorithm, AdaptiveRule, BitParityRule,
    BitSequence, MarkerThreeColoring, WindowMisRule,
};
use lcl_core::util::log_star;

use crate::config::{AlgorithmName, AlgorithmSpec, ExperimentConfig, Kind, ShiftRule};

/// Process outcome, mapped to exit codes 0/1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Falsified,
}

pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    cfg.validate()?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    match cfg.kind {
        Kind::Run => run_single(cfg, out_dir),
        Kind::Sweep => run_sweep(cfg, out_dir),
        Kind::Adversary => run_adversary(cfg, out_dir),
        Kind::Bridge => run_bridge(cfg, out_dir),
        Kind::Shift => run_shift(cfg, out_dir),
        Kind::Rotation => run_rotation(cfg, out_dir),
    }
}

fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<()> {
    let path = out_dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct RunSummary {
    kind: &'static str,
    graph: String,
    algorithm: String,
    problem: String,
    n: usize,
    n_nominal: usize,
    seed: u64,
    trials: u64,
    failures: u64,
    rate: f64,
    wilson_low: f64,
    wilson_high: f64,
    verdict: String,
}

fn run_single(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let graph_spec = cfg.graph.as_ref().unwrap();
    let alg_spec = cfg.algorithm.as_ref().unwrap();
    let problem_spec = cfg.problem.as_ref().unwrap();
    let g = graph_spec.build(cfg.seed)?;
    let problem = problem_spec.build(&g)?;
    let n_nominal = cfg.n_nominal.unwrap_or(g.n());

    let mut rows: Vec<(u64, usize, usize)> = Vec::new(); // trial, rounds, violations
    match alg_spec.name {
        AlgorithmName::Linial => {
            let ids = IdAssignment::sequential(&g, n_nominal)?;
            let out = linial_coloring(&g, &ids, n_nominal)?;
            let violations = problem.check(&g, &out.labeling)?;
            rows.push((0, out.rounds_used, violations.len()));
        }
        AlgorithmName::Greedy => {
            use rand::seq::SliceRandom;
            let mut order: Vec<usize> = (0..g.n()).collect();
            order.shuffle(&mut lcl_core::rng::vertex_stream(cfg.seed, 0, 0));
            let labeling = greedy_coloring(&g, &order)?;
            let violations = problem.check(&g, &labeling)?;
            rows.push((0, 0, violations.len()));
        }
        AlgorithmName::Constant | AlgorithmName::IdParity => {
            let alg = build_view_algorithm(alg_spec);
            let ids = IdAssignment::sequential(&g, n_nominal)?;
            let out = run(&g, alg.as_ref(), n_nominal, PayloadSource::Ids(&ids))?;
            let violations = problem.check(&g, &out.labeling)?;
            rows.push((0, out.rounds_used, violations.len()));
        }
        AlgorithmName::Luby => {
            for trial in 0..cfg.trials {
                let out = luby_mis(&g, cfg.seed, trial)?;
                let violations = problem.check(&g, &out.labeling)?;
                rows.push((trial, out.rounds_used, violations.len()));
            }
        }
        AlgorithmName::CoinFlip => {
            let alg = lcl_core::algorithms::CoinFlipTwoColoring;
            let runner = RandomizedView {
                alg: &alg,
                n_nominal,
            };
            let est = estimate_failure(&g, &runner, &problem, cfg.trials.max(1), cfg.seed)?;
            for (trial, failed) in est.failed.iter().enumerate() {
                rows.push((trial as u64, 0, usize::from(*failed)));
            }
        }
    }

    let mut csv = csv::Writer::from_path(out_dir.join("run.csv"))?;
    csv.write_record([
        "graph",
        "n",
        "algorithm",
        "problem",
        "n_nominal",
        "seed",
        "trial",
        "rounds_used",
        "violations",
    ])?;
    for (trial, rounds, violations) in &rows {
        csv.write_record([
            graph_spec.describe(),
            g.n().to_string(),
            alg_spec.describe(),
            problem.name().to_string(),
            n_nominal.to_string(),
            cfg.seed.to_string(),
            trial.to_string(),
            rounds.to_string(),
            violations.to_string(),
        ])?;
    }
    csv.flush()?;

    let failures = rows.iter().filter(|&&(_, _, v)| v > 0).count() as u64;
    let trials = rows.len() as u64;
    let (low, high) = lcl_core::util::wilson_interval(failures, trials, 1.96);
    let falsified = alg_spec.asserts_correctness() && failures > 0;
    let summary = RunSummary {
        kind: "run",
        graph: graph_spec.describe(),
        algorithm: alg_spec.describe(),
        problem: problem.name().to_string(),
        n: g.n(),
        n_nominal,
        seed: cfg.seed,
        trials,
        failures,
        rate: failures as f64 / trials as f64,
        wilson_low: low,
        wilson_high: high,
        verdict: if falsified {
            "falsified".into()
        } else {
            "ok".into()
        },
    };
    write_json(out_dir, "summary.json", &summary)?;
    Ok(if falsified {
        Verdict::Falsified
    } else {
        Verdict::Ok
    })
}

fn build_view_algorithm(spec: &AlgorithmSpec) -> Box<dyn LocalAlgorithm> {
    match spec.name {
        AlgorithmName::Constant => Box::new(ConstantLabel(spec.label.unwrap_or(1))),
        AlgorithmName::IdParity => Box::new(IdParityTwoColoring {
            claimed_radius: spec.radius.unwrap_or(0),
        }),
        _ => unreachable!("only view algorithms are built here"),
    }
}

fn run_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let sweep = cfg.sweep.as_ref().unwrap();
    let mut csv = csv::Writer::from_path(out_dir.join("sweep.csv"))?;
    csv.write_record(["n", "rounds_used", "log_star", "violations", "seed"])?;
    let mut any_violation = false;
    for &n in &sweep.ns {
        let g = lcl_core::graph::make_cycle(n)?;
        let ids = IdAssignment::sequential(&g, n)?;
        let out = linial_coloring(&g, &ids, n)?;
        let problem = lcl_core::problems::coloring_problem(g.degree_bound() + 1)?;
        let violations = problem.check(&g, &out.labeling)?;
        any_violation |= !violations.is_empty();
        csv.write_record([
            n.to_string(),
            out.rounds_used.to_string(),
            log_star(n as u64).to_string(),
            violations.len().to_string(),
            cfg.seed.to_string(),
        ])?;
    }
    csv.flush()?;
    write_json(
        out_dir,
        "summary.json",
        &serde_json::json!({
            "kind": "sweep",
            "ns": sweep.ns,
            "seed": cfg.seed,
            "verdict": if any_violation { "falsified" } else { "ok" },
        }),
    )?;
    Ok(if any_violation {
        Verdict::Falsified
    } else {
        Verdict::Ok
    })
}

fn run_adversary(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let alg_spec = cfg.algorithm.as_ref().unwrap();
    let g = cfg.graph.as_ref().unwrap();
    let n = g.n.context("adversary needs the path length `graph.n`")?;
    let alg: Box<dyn LocalAlgorithm> = match alg_spec.name {
        AlgorithmName::IdParity | AlgorithmName::Constant => build_view_algorithm(alg_spec),
        other => bail!("the adversary probes 2-labeling view algorithms, got {other:?}"),
    };
    let outcome = two_color_adversary(alg.as_ref(), n)?;
    let (verdict, json) = match &outcome {
        AdversaryOutcome::Falsified(cert) => (
            Verdict::Falsified,
            serde_json::json!({
                "kind": "adversary",
                "algorithm": alg_spec.describe(),
                "outcome": "falsified",
                "seed": cfg.seed,
                "certificate": cert,
            }),
        ),
        AdversaryOutcome::Inapplicable { t, n } => (
            Verdict::Ok,
            serde_json::json!({
                "kind": "adversary",
                "algorithm": alg_spec.describe(),
                "outcome": "inapplicable",
                "seed": cfg.seed,
                "t": t,
                "n": n,
            }),
        ),
        AdversaryOutcome::LocalityBreach { t, n } => (
            Verdict::Falsified,
            serde_json::json!({
                "kind": "adversary",
                "algorithm": alg_spec.describe(),
                "outcome": "locality_breach",
                "seed": cfg.seed,
                "t": t,
                "n": n,
            }),
        ),
    };
    write_json(out_dir, "adversary.json", &json)?;
    Ok(verdict)
}

fn run_bridge(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let g = cfg.graph.as_ref().unwrap().build(cfg.seed)?;
    let n_nominal = cfg.n_nominal.unwrap();
    let problem: LclProblem = cfg.problem.as_ref().unwrap().build(&g)?;
    let default_spec = AlgorithmSpec {
        name: AlgorithmName::Linial,
        label: None,
        radius: None,
    };
    let alg_spec = cfg.algorithm.as_ref().unwrap_or(&default_spec);
    let outcome = match alg_spec.name {
        AlgorithmName::Linial => {
            let alg = LinialColoring::new(
                g.degree_bound(),
                lcl_core::util::ceil_log2(n_nominal.max(1) as u64),
            );
            bridge::simulate(&g, &alg, &problem, n_nominal)?
        }
        AlgorithmName::Constant | AlgorithmName::IdParity => {
            let alg = build_view_algorithm(alg_spec);
            bridge::simulate(&g, alg.as_ref(), &problem, n_nominal)?
        }
        other => bail!("the bridge runs deterministic view algorithms, got {other:?}"),
    };
    let verdict = if outcome.violations.is_empty() {
        Verdict::Ok
    } else {
        Verdict::Falsified
    };
    write_json(
        out_dir,
        "bridge.json",
        &serde_json::json!({
            "kind": "bridge",
            "graph": cfg.graph.as_ref().unwrap().describe(),
            "algorithm": alg_spec.describe(),
            "problem": problem.name(),
            "seed": cfg.seed,
            "plan": outcome.plan,
            "violations": outcome.violations.len(),
            "verdict": if verdict == Verdict::Ok { "ok" } else { "falsified" },
        }),
    )?;
    Ok(verdict)
}

fn run_shift(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let spec = cfg.shift.as_ref().unwrap();
    let samples: Vec<BitSequence> = (0..spec.samples)
        .map(|i| sample_aperiodic(spec.half_width, spec.p_max, cfg.seed.wrapping_add(i as u64)))
        .collect::<Result<_, _>>()?;

    let (rule, problem): (Box<dyn AdaptiveRule>, LclProblem) = match spec.rule {
        ShiftRule::ThreeColoring => (
            Box::new(MarkerThreeColoring),
            lcl_core::problems::coloring_problem(3)?,
        ),
        ShiftRule::Mis => (Box::new(WindowMisRule), lcl_core::problems::mis_problem()),
        ShiftRule::BitParity => (
            Box::new(BitParityRule),
            lcl_core::problems::coloring_problem(2)?,
        ),
        ShiftRule::LiftedLinial => {
            let n_nominal = cfg.n_nominal.unwrap_or(1024);
            let alg = LinialColoring::with_prefix_free_ids(2, 125);
            (
                Box::new(window_rule_from_algorithm(alg, n_nominal)),
                lcl_core::problems::coloring_problem(3)?,
            )
        }
    };

    let report = check_window_rule(rule.as_ref(), &problem, &samples, spec.span);

    let mut csv = csv::Writer::from_path(out_dir.join("shift.csv"))?;
    csv.write_record(["radius", "count"])?;
    for &(radius, count) in &report.radius_counts {
        csv.write_record([radius.to_string(), count.to_string()])?;
    }
    csv.flush()?;

    let verdict = if report.violations.is_empty() && report.cap_errors == 0 {
        Verdict::Ok
    } else {
        Verdict::Falsified
    };
    write_json(
        out_dir,
        "shift.json",
        &serde_json::json!({
            "kind": "shift",
            "rule": rule.name(),
            "problem": problem.name(),
            "seed": cfg.seed,
            "samples": report.samples,
            "span": report.span,
            "evaluated": report.evaluated,
            "cap_errors": report.cap_errors,
            "violation_count": report.violations.len(),
            "first_violations": report.violations.iter().take(100).collect::<Vec<_>>(),
            "radius_max": report.radius_max,
            "radius_median": report.radius_median,
            "verdict": if verdict == Verdict::Ok { "ok" } else { "falsified" },
        }),
    )?;
    Ok(verdict)
}

fn run_rotation(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Verdict> {
    let spec = cfg.rotation.as_ref().unwrap();
    let mut csv = csv::Writer::from_path(out_dir.join("rotation.csv"))?;
    csv.write_record(["alpha", "rungs", "orbit_len", "violations", "seed"])?;
    let mut rows = Vec::new();
    let mut any_violation = false;
    for &alpha in &spec.alphas {
        let rule =
            rotation_coloring(alpha).map_err(|e| anyhow::anyhow!("alpha {alpha} rejected: {e}"))?;
        let orbit = OrbitSegment::new(alpha, spec.x0, spec.orbit_len);
        let violations = check_rotation(&rule, &orbit);
        any_violation |= !violations.is_empty();
        csv.write_record([
            format!("{alpha}"),
            rule.rungs.to_string(),
            spec.orbit_len.to_string(),
            violations.len().to_string(),
            cfg.seed.to_string(),
        ])?;
        rows.push(serde_json::json!({
            "alpha": alpha,
            "rungs": rule.rungs,
            "violations": violations.len(),
            "class_intervals": (1..=3).map(|l| rule.class_intervals(l)).collect::<Vec<_>>(),
        }));
    }
    csv.flush()?;
    let verdict = if any_violation {
        Verdict::Falsified
    } else {
        Verdict::Ok
    };
    write_json(
        out_dir,
        "rotation.json",
        &serde_json::json!({
            "kind": "rotation",
            "seed": cfg.seed,
            "orbit_len": spec.orbit_len,
            "x0": spec.x0,
            "rules": rows,
            "verdict": if verdict == Verdict::Ok { "ok" } else { "falsified" },
        }),
    )?;
    Ok(verdict)
}

/// Writes the graph described by the config to an edge-list file.
pub fn generate_graph(cfg: &ExperimentConfig, out: &Path) -> Result<Graph> {
    let spec = cfg.graph.as_ref().context("gen needs a `graph` section")?;
    let g = spec.build(cfg.seed)?;
    fs::write(out, g.save()).with_context(|| format!("writing {}", out.display()))?;
    Ok(g)
}
