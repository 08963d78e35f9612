//! Acceptance suite: every claim the artifact makes, exercised end to end
//! at desk scale with pinned tolerances. One test per claim; each prints
//! a PASS line on success.

mod common;

use std::sync::Mutex;
use std::time::Instant;

use lcl_core::algorithms::{
    greedy_coloring, linial_coloring, luby_mis, two_color_adversary, verify_certificate,
    AdversaryOutcome, IdParityTwoColoring, LinialColoring,
};
use lcl_core::bits::BitString;
use lcl_core::bridge;
use lcl_core::engine::{
    find_close_collision, run, IdAssignment, LocalAlgorithm, Mode, PayloadSource,
};
use lcl_core::graph::{make_cycle, make_grid_torus, make_path, make_random_bounded, Graph, View};
use lcl_core::problems::{coloring_problem, mis_problem, perfect_matching_problem, Label};
use lcl_core::rotation::{check_rotation, rotation_coloring, OrbitSegment};
use lcl_core::shift::{
    certify_locality, check_window_rule, sample_aperiodic, BitSequence, MarkerThreeColoring,
};
use lcl_core::util::log_star;

/// Round budget beyond log*₂(n) for the cycle schedule (d = 2), covering
/// identifier widths up to 64 bits. The measured schedule stays well under
/// it; the budget is what round-count claims are checked against.
const CYCLE_ROUND_SLACK: usize = 20;

/// Wall-clock-sensitive criteria take this lock so their budgets are not
/// distorted by each other's thread pools.
static HEAVY: Mutex<()> = Mutex::new(());

fn heavy() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

fn assert_proper_linial(g: &Graph, n_nominal: usize) -> usize {
    let ids = IdAssignment::sequential(g, n_nominal).unwrap();
    let out = linial_coloring(g, &ids, n_nominal).unwrap();
    let problem = coloring_problem(g.degree_bound() + 1).unwrap();
    let violations = problem.check(g, &out.labeling).unwrap();
    assert!(
        violations.is_empty(),
        "{} violations on n={}",
        violations.len(),
        g.n()
    );
    out.rounds_used
}

#[test]
fn a01_linial_coloring_correctness_at_scale() {
    let _guard = heavy();
    let start = Instant::now();

    for exp in [8u32, 12, 16, 20] {
        let g = make_cycle(1usize << exp).unwrap();
        assert_proper_linial(&g, g.n());
    }
    let torus = make_grid_torus(&[100, 100]).unwrap();
    assert_proper_linial(&torus, torus.n());
    for seed in 0..100u64 {
        let g = make_random_bounded(1000, 5, 2000, seed).unwrap();
        assert_proper_linial(&g, g.n());
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!("PASS a01 linial (d+1)-coloring: cycles 2^8..2^20, torus 100x100, 100 random d<=5 graphs, 0 violations in {elapsed:?}");
}

#[test]
fn a02_linial_round_counts_scale_like_log_star() {
    let mut rounds = Vec::new();
    for exp in [8u32, 12, 16, 20] {
        let n = 1usize << exp;
        let alg = LinialColoring::new(2, lcl_core::util::ceil_log2(n as u64));
        rounds.push((n, alg.rounds()));
    }
    for w in rounds.windows(2) {
        assert!(w[0].1 <= w[1].1, "rounds decreased: {rounds:?}");
    }
    let at16 = rounds[2].1;
    let at20 = rounds[3].1;
    assert!(at20 - at16 <= 1, "2^16 -> 2^20 grew by {}", at20 - at16);
    assert_eq!(log_star(1 << 16), 4);
    assert_eq!(log_star(1 << 20), 4);
    const { assert!(CYCLE_ROUND_SLACK <= 40) };
    for &(n, r) in &rounds {
        assert!(
            r <= log_star(n as u64) as usize + CYCLE_ROUND_SLACK,
            "n={n}: {r} rounds exceeds log* + {CYCLE_ROUND_SLACK}"
        );
    }
    println!("PASS a02 log*-scaling: rounds {rounds:?}, slack constant {CYCLE_ROUND_SLACK} <= 40");
}

#[test]
fn a03_greedy_oracle_bounds() {
    let _guard = heavy();
    use rand::seq::SliceRandom;

    // 10^3 random (graph, order) pairs with degree bound <= 6.
    for seed in 0..1000u64 {
        let n = 20 + (seed as usize % 80);
        let d = 2 + (seed as usize % 5); // 2..=6
        let g = make_random_bounded(n, d, n * d / 2, seed).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut lcl_core::rng::vertex_stream(seed, 1, 0));
        let coloring = greedy_coloring(&g, &order).unwrap();
        let k = g.degree_bound() + 1;
        assert!(coloring.as_slice().iter().all(|&c| c <= k));
        let problem = coloring_problem(k).unwrap();
        assert!(
            problem.check(&g, &coloring).unwrap().is_empty(),
            "seed {seed}"
        );
    }

    // Exhaustive: every labeled graph on up to 6 vertices, greedy stays
    // between the true chromatic number and degree_bound + 1.
    use rayon::prelude::*;
    (1usize..=6).into_par_iter().for_each(|n| {
        for g in common::graphs_on(n, None) {
            let chi = common::chromatic_number(&g);
            let order: Vec<usize> = (0..n).collect();
            let coloring = greedy_coloring(&g, &order).unwrap();
            let used = coloring.distinct_count();
            assert!(chi <= used && used <= g.degree_bound() + 1);
            let problem = coloring_problem(g.degree_bound() + 1).unwrap();
            assert!(problem.check(&g, &coloring).unwrap().is_empty());
        }
    });
    println!("PASS a03 greedy coloring: 1000 random pairs d<=6 and all 33867 graphs on <=6 vertices within [chi, d+1]");
}

#[test]
fn a04_luby_mis_runs_clean() {
    let _guard = heavy();
    let g = make_cycle(10_000).unwrap();
    let problem = mis_problem();
    let cap = 64 * lcl_core::util::ceil_log2(10_000);
    use rayon::prelude::*;
    let rounds: Vec<usize> = (0..1000u64)
        .into_par_iter()
        .map(|trial| {
            let out = luby_mis(&g, 2024, trial).unwrap();
            assert!(out.rounds_used < cap, "trial {trial} hit the cap");
            assert!(
                problem.check(&g, &out.labeling).unwrap().is_empty(),
                "trial {trial} produced violations"
            );
            out.rounds_used
        })
        .collect();
    let mut sorted = rounds.clone();
    sorted.sort_unstable();
    let median = sorted[sorted.len() / 2];
    println!(
        "PASS a04 randomized MIS: 1000 trials on cycle(10^4), 0 violations, median rounds {median}, max {} < cap {cap}",
        sorted.last().unwrap()
    );
}

#[test]
fn a05_two_coloring_adversary() {
    let _guard = heavy();
    let start = Instant::now();

    let parity0 = IdParityTwoColoring { claimed_radius: 0 };
    match two_color_adversary(&parity0, 1000).unwrap() {
        AdversaryOutcome::Falsified(cert) => {
            assert!(verify_certificate(&parity0, &cert).unwrap());
        }
        other => panic!("radius-0 parity should be falsified, got {other:?}"),
    }

    let parity10 = IdParityTwoColoring { claimed_radius: 10 };
    match two_color_adversary(&parity10, 1000).unwrap() {
        AdversaryOutcome::Falsified(cert) => {
            assert!(!cert.base_run_failed, "swap path should be exercised");
            assert!(verify_certificate(&parity10, &cert).unwrap());
            // The swap mirrors colors: x keeps its color, y and z trade.
            assert_eq!(cert.swapped_colors.0, cert.base_colors.0);
            assert_eq!(cert.swapped_colors.1, cert.base_colors.2);
            assert_eq!(cert.swapped_colors.2, cert.base_colors.1);
        }
        other => panic!("radius-10 parity should be falsified, got {other:?}"),
    }

    struct FullViewTwoColoring;
    impl LocalAlgorithm for FullViewTwoColoring {
        fn name(&self) -> &str {
            "full-view"
        }
        fn mode(&self) -> Mode {
            Mode::Deterministic
        }
        fn radius(&self, n: usize) -> usize {
            n
        }
        fn out(&self, view: &View) -> Label {
            let endpoint = (0..view.len())
                .filter(|&i| view.host_degree(i) == 1)
                .min_by_key(|&i| view.payload(i).value())
                .unwrap_or(0);
            1 + view.dist(endpoint) % 2
        }
    }
    match two_color_adversary(&FullViewTwoColoring, 1000).unwrap() {
        AdversaryOutcome::Inapplicable { t, n } => {
            assert_eq!((t, n), (1000, 1000));
        }
        other => panic!("full-view colorer should be inapplicable, got {other:?}"),
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}, budget 1 s");
    println!("PASS a05 adversary: verified certificates at T=0 and T=10 on n=1000, full-view case inapplicable, in {elapsed:?}");
}

#[test]
fn a06_bridge_on_a_large_host() {
    let _guard = heavy();
    let start = Instant::now();

    let host = make_cycle(100_000).unwrap();
    let n_nominal = 1024usize;
    let alg = LinialColoring::new(2, lcl_core::util::ceil_log2(n_nominal as u64));
    let t = alg.rounds();
    let out = bridge::simulate(&host, &alg, &coloring_problem(3).unwrap(), n_nominal).unwrap();
    assert!(
        out.violations.is_empty(),
        "{} violations",
        out.violations.len()
    );
    assert!(out.plan.colors_used <= n_nominal);
    assert_eq!(out.plan.power_radius, 2 * t + 2);

    // Exhaustive distinctness within 2T+2 across all 10^5 vertices.
    let (ids, _) = bridge::pseudo_ids(&host, t, n_nominal).unwrap();
    assert!(find_close_collision(&host, ids.ids(), 2 * t + 2).is_none());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 120 s");
    println!(
        "PASS a06 bridge: cycle(10^5) at nominal 1024, {} colors, ids distinct within {}, proper 3-coloring in {elapsed:?}",
        out.plan.colors_used, out.plan.power_radius
    );
}

#[test]
fn a07_random_ids_simulate_deterministic() {
    let _guard = heavy();
    let n = 1000usize;
    let g = make_cycle(n).unwrap();
    let id_bits = lcl_core::util::ceil_3_log2(n as u64);
    assert_eq!(id_bits, 30);
    let alg = LinialColoring::new(2, id_bits);
    let problem = coloring_problem(3).unwrap();
    let trials = 10_000u64;
    let seed = 20_26;

    use rayon::prelude::*;
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let ids = IdAssignment::random(&g, n, seed, trial);
            let collided = ids.has_collision();
            let out = alg.color_graph(&g, &ids).unwrap();
            let failed = !problem.check(&g, &out.labeling).unwrap().is_empty();
            (collided, failed)
        })
        .collect();

    let collisions = outcomes.iter().filter(|&&(c, _)| c).count() as f64;
    for (trial, &(collided, failed)) in outcomes.iter().enumerate() {
        assert!(
            !failed || collided,
            "trial {trial} failed without a collision"
        );
    }
    let p = 1.0 / n as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = collisions / trials as f64;
    assert!(
        rate <= p + 3.0 * sigma,
        "collision rate {rate} above 1/n + 3 sigma = {}",
        p + 3.0 * sigma
    );
    println!(
        "PASS a07 randomized simulation: 10^4 trials of 30-bit ids on cycle(1000), collision rate {rate:.5} <= {:.5}, failures only in collision trials",
        p + 3.0 * sigma
    );
}

#[test]
fn a08_shift_three_coloring_along_samples() {
    let _guard = heavy();
    use rayon::prelude::*;

    let w = 10_000i64;
    let span = 5_000i64;
    let p_max = 64usize;
    let samples: Vec<BitSequence> = (0..1000u64)
        .into_par_iter()
        .map(|seed| sample_aperiodic(w, p_max, seed).unwrap())
        .collect();

    // Independent period scan on a subsample: for every period up to the
    // bound, some position in range must witness a mismatch.
    samples.iter().step_by(20).for_each(|seq| {
        for p in 1..=p_max as i64 {
            let broken =
                (seq.lo()..=seq.hi() - p).any(|i| seq.bit(i).unwrap() != seq.bit(i + p).unwrap());
            assert!(broken, "period {p} survived the sampler");
        }
    });

    let rule = MarkerThreeColoring;
    let problem = coloring_problem(3).unwrap();
    let report = check_window_rule(&rule, &problem, &samples, span);
    assert_eq!(report.cap_errors, 0, "radius caps hit");
    assert_eq!(report.violations, vec![], "adjacent equal labels");
    assert_eq!(report.evaluated, 1000 * (2 * span as u64 + 1));

    // Every label must reproduce from its certified window alone.
    samples.par_iter().for_each(|seq| {
        for pos in -span..=span {
            assert!(certify_locality(&rule, seq, pos).unwrap());
        }
    });

    println!(
        "PASS a08 shift-line 3-coloring: 1000 samples x 10^4 span, 0 adjacent-equal pairs, all locality certificates hold, max radius {}, median {}",
        report.radius_max, report.radius_median
    );
}

#[test]
fn a09_rotation_rule_and_two_label_falsification() {
    let alphas: [f64; 10] = [
        0.6180339887498949,             // (√5-1)/2
        std::f64::consts::SQRT_2 - 1.0, // √2-1
        3.0f64.sqrt() - 1.0,            // √3-1
        5.0f64.sqrt() - 2.0,            // √5-2
        6.0f64.sqrt() - 2.0,            // √6-2
        7.0f64.sqrt() - 2.0,            // √7-2
        10.0f64.sqrt() - 3.0,           // √10-3
        11.0f64.sqrt() - 3.0,           // √11-3
        13.0f64.sqrt() - 3.0,           // √13-3
        2.0 - std::f64::consts::SQRT_2, // 2-√2, above 1/2 to hit the mapping
    ];

    for &alpha in &alphas {
        let rule = rotation_coloring(alpha).unwrap();
        let orbit = OrbitSegment::new(alpha, 0.1, 100_000);
        let violations = check_rotation(&rule, &orbit);
        assert_eq!(violations, vec![], "alpha {alpha}");
    }

    // Candidate 2-label interval partitions: alternating labels over cut
    // grids of 1..=3 cuts.
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    for (i, &a) in grid.iter().enumerate() {
        candidates.push(vec![a]);
        for (j, &b) in grid.iter().enumerate().skip(i + 1) {
            candidates.push(vec![a, b]);
            for &c in grid.iter().skip(j + 1) {
                if (c * 10.0).fract().abs() < 1e-9 {
                    candidates.push(vec![a, b, c]);
                }
            }
        }
    }
    assert!(candidates.len() <= 1000, "{} candidates", candidates.len());

    let two_label = |cuts: &[f64], x: f64| -> Label {
        let piece = cuts.iter().filter(|&&c| x >= c).count();
        1 + piece % 2
    };
    for &alpha in &alphas {
        for cuts in &candidates {
            let mut found = false;
            let mut prev = two_label(cuts, 0.1);
            for k in 1..10_000 {
                let x = (0.1 + k as f64 * alpha).rem_euclid(1.0);
                let label = two_label(cuts, x);
                if label == prev {
                    found = true;
                    break;
                }
                prev = label;
            }
            assert!(
                found,
                "2-label rule with cuts {cuts:?} survived alpha {alpha}"
            );
        }
    }
    println!(
        "PASS a09 rotation: 10 quadratic irrationals, 0 violations over 10^5-step orbits; all {} candidate 2-label interval rules falsified",
        candidates.len()
    );
}

#[test]
fn a10_checker_ground_truth_on_small_graphs() {
    let _guard = heavy();
    use rayon::prelude::*;

    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=6usize {
        graphs.extend(
            common::graphs_on(n, Some(3))
                .into_iter()
                .filter(common::is_connected),
        );
    }
    let count = graphs.len();
    graphs.par_iter().for_each(|g| {
        for k in 1..=4usize {
            let problem = coloring_problem(k).unwrap();
            assert_eq!(
                common::solvable_by_check(&problem, g),
                common::colorable(g, k),
                "coloring k={k} on {:?}",
                g.edges().collect::<Vec<_>>()
            );
        }
        assert!(
            common::solvable_by_check(&mis_problem(), g),
            "MIS always exists"
        );
        let d = g.degree_bound().max(1);
        let problem = perfect_matching_problem(d).unwrap();
        assert_eq!(
            common::solvable_by_check(&problem, g),
            common::matchable(g),
            "matching on {:?}",
            g.edges().collect::<Vec<_>>()
        );
    });
    println!("PASS a10 checker ground truth: {count} connected graphs on <=6 vertices with d<=3 agree with brute-force solvers exactly");
}

/// The adversary's claimed-radius wrapper from a05 exercises the swap; the
/// path 2-coloring construction also refutes any *lifted* parity claim, so
/// the two falsification routes agree.
#[test]
fn a05b_adversary_and_checker_agree_on_parity() {
    let alg = IdParityTwoColoring { claimed_radius: 0 };
    let g = make_path(200).unwrap();
    // Base (sequential) ids 2-color the path; shuffled ids generally fail.
    let ids = IdAssignment::sequential(&g, 200).unwrap();
    let out = run(&g, &alg, 200, PayloadSource::Ids(&ids)).unwrap();
    let problem = coloring_problem(2).unwrap();
    assert!(problem.check(&g, &out.labeling).unwrap().is_empty());

    let shuffled: Vec<BitString> = {
        use rand::seq::SliceRandom;
        let mut vals: Vec<usize> = (0..200).collect();
        vals.shuffle(&mut lcl_core::rng::vertex_stream(4, 0, 0));
        vals.iter()
            .map(|&v| BitString::from_value(v as u128, 8))
            .collect()
    };
    let shuffled =
        IdAssignment::from_strings(&g, shuffled, lcl_core::engine::IdScope::GlobalDistinct)
            .unwrap();
    let out = run(&g, &alg, 200, PayloadSource::Ids(&shuffled)).unwrap();
    assert!(
        !problem.check(&g, &out.labeling).unwrap().is_empty(),
        "parity of shuffled ids should not 2-color a 200-path"
    );
    println!("PASS a05b parity claim fails under shuffled ids, matching the adversary's verdict");
}
