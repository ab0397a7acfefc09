//! Acceptance suite: one test per criterion, every equality exact.
//!
//! Criteria 5–7 share a single end-to-end sweep over
//! {solvable classes} x {adversaries} x {seeds} x {rigidity constants};
//! the sweep runs once (lazily) and the three criteria assert different
//! slices of its evidence.

mod common;

use minsum_coverage::algorithms::{analyze, move_plan, AlgorithmId};
use minsum_coverage::assignment::{
    brute_force_circle_optimum, brute_force_line_optimum, candidate_cost, extremal_set,
    line_targets, segment_optimal_cost,
};
use minsum_coverage::configuration::is_regular_ngon;
use minsum_coverage::geometry::{format_scalar, int, rat, Scalar};
use minsum_coverage::harness::demo::{demo_impossibility, DemoOutcome};
use minsum_coverage::harness::scenario::{Scenario, ScenarioError};
use minsum_coverage::harness::trace::serialize_trace;
use minsum_coverage::harness::verify::verify_trace;
use minsum_coverage::scheduler::{run, AdversaryKind, Event, Policy, RunOutcome, SchedKind};
use minsum_coverage::{ConfigClass, Configuration, Space};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn pass(criterion: &str, detail: String) {
    println!("criterion {criterion}: PASS — {detail}");
}

// ---------------------------------------------------------------------
// criterion 1
// ---------------------------------------------------------------------

#[test]
fn criterion_1_segment_formula_and_optimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    for case in 0..500u64 {
        let n = 1 + (case % 7) as usize;
        let config = common::random_segment_config(&mut rng, n);
        let (a, b) = match config.space() {
            Space::Segment { a, b } => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        let targets = line_targets(&a, &b, n).unwrap();
        // directly re-derive x_i = a + (2i-1)(b-a)/(2n)
        for i in 0..n {
            let expected =
                &a + (&b - &a) * rat(2 * (i as i64 + 1) - 1, 1) / rat(2 * n as i64, 1);
            assert_eq!(targets.points[i], expected, "formula mismatch at i={i}");
            assert!(targets.points[i] > a && targets.points[i] < b);
        }
        let brute = brute_force_line_optimum(&config).unwrap();
        let ordered = segment_optimal_cost(&config).unwrap();
        assert_eq!(
            brute.cost, ordered,
            "n!-minimum must equal the order-preserving cost for {:?}",
            config.positions()
        );
    }
    pass(
        "1",
        "segment target formula exact and order-preserving matching optimal on 500 random configurations (n <= 7)".into(),
    );
}

// ---------------------------------------------------------------------
// criterion 2
// ---------------------------------------------------------------------

#[test]
fn criterion_2_circle_candidate_optimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for case in 0..500u64 {
        let n = 1 + (case % 6) as usize;
        let config = common::random_circle_config(&mut rng, n);
        let report = extremal_set(&config);
        let brute = brute_force_circle_optimum(&config, 4).unwrap();
        assert_eq!(
            report.optimum, brute.cost,
            "anchored optimum must equal the grid brute force for {:?}",
            config.positions()
        );
        // Fixed-point witness: the optimum is always attained by an anchored
        // assignment, which fixes its anchor robot. (The stronger claim that
        // EVERY optimal matching fixes a robot is false for even n, where
        // rotation plateaus of equal cost exist; see the repository notes.)
        assert!(!report.extremal.is_empty());
        for &e in &report.extremal {
            assert_eq!(candidate_cost(&config, e), brute.cost);
        }
    }
    pass(
        "2",
        "anchored D* equals the robot-offset-grid brute force exactly on 500 random configurations (n <= 6); every optimum is witnessed by an anchor-fixing matching".into(),
    );
}

// ---------------------------------------------------------------------
// criterion 3
// ---------------------------------------------------------------------

#[test]
fn criterion_3_mirror_cost_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    for case in 0..200u64 {
        let n = 3 + (case % 6) as usize;
        let config = common::gen_single_axis(&mut rng, n);
        let axes = config.lines_of_symmetry();
        assert_eq!(axes.len(), 1);
        for i in 0..config.n() {
            let j = config.mirror_index(i, &axes[0]).expect("mirror exists");
            assert_eq!(
                candidate_cost(&config, i),
                candidate_cost(&config, j),
                "mirror anchors must cost the same"
            );
        }
    }
    pass(
        "3",
        "anchor cost equals mirror-anchor cost for every robot of 200 single-axis configurations".into(),
    );
}

// ---------------------------------------------------------------------
// criterion 4
// ---------------------------------------------------------------------

#[test]
fn criterion_4_extremal_placement() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut unique_seen = 0;
    for case in 0..100u64 {
        let n = 3 + (case % 5) as usize;
        let config = common::gen_i2(&mut rng, n);
        let analysis = analyze(&config);
        assert_eq!(analysis.symmetry.class, ConfigClass::I2);
        let axis = &analysis.symmetry.lines_of_symmetry[0];
        assert!(
            analysis
                .cost
                .extremal
                .iter()
                .any(|&e| axis.passes_through(config.position(e), &int(1))),
            "some extremal robot must lie on the axis"
        );
        if analysis.cost.extremal.len() == 1 {
            unique_seen += 1;
            let e = *analysis.cost.extremal.iter().next().unwrap();
            assert!(axis.passes_through(config.position(e), &int(1)));
        }
    }
    for case in 0..100u64 {
        let n = [6usize, 6, 8, 9, 10][(case % 5) as usize];
        let config = common::gen_i4(&mut rng, n);
        let analysis = analyze(&config);
        assert_eq!(analysis.symmetry.class, ConfigClass::I4);
        let classes = config.rotational_classes().unwrap();
        // the extremal set is exactly one rotational class, and all of its
        // members determine the same destination assignment. (Degenerate
        // cost ties across classes exist — see the regression tests — and
        // are excluded by the generic generator.)
        let class = classes
            .iter()
            .find(|class| {
                class.len() == analysis.cost.extremal.len()
                    && class.iter().all(|i| analysis.cost.extremal.contains(i))
            })
            .expect("extremal set must be exactly one rotational class");
        let reference = minsum_coverage::assignment::ngon_targets(&config, class[0]);
        for &e in class {
            let ts = minsum_coverage::assignment::ngon_targets(&config, e);
            assert_eq!(ts.sorted_points(), reference.sorted_points());
            for i in 0..config.n() {
                assert_eq!(ts.target_of(i), reference.target_of(i));
            }
        }
    }
    pass(
        "4",
        format!(
            "extremal robots on the axis in 100 I2 configurations ({unique_seen} with a unique anchor); extremal set equal to exactly one rotational class in 100 I4 configurations"
        ),
    );
}

// ---------------------------------------------------------------------
// criteria 5–7: the shared end-to-end sweep
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepClass {
    I1Unique,
    I1Multi,
    I2,
    I4,
    I5,
    Segment,
}

const SWEEP_CLASSES: [SweepClass; 6] = [
    SweepClass::I1Unique,
    SweepClass::I1Multi,
    SweepClass::I2,
    SweepClass::I4,
    SweepClass::I5,
    SweepClass::Segment,
];

const SWEEP_ADVERSARIES: [AdversaryKind; 3] = [
    AdversaryKind::RoundRobin,
    AdversaryKind::SeededRandom,
    AdversaryKind::PendingMaximizer,
];

const SWEEP_SEEDS: u64 = 100;

struct SweepStats {
    runs: usize,
    convergence_failures: Vec<String>,
    freeze_failures: Vec<String>,
    monotonicity_failures: Vec<String>,
    verified_samples: usize,
}

fn generate(class: SweepClass, rng: &mut ChaCha8Rng, seed: u64) -> Configuration {
    match class {
        SweepClass::I1Unique => common::gen_i1_unique(rng, [3usize, 5, 7][(seed % 3) as usize]),
        SweepClass::I1Multi => common::gen_i1_multi(rng, 3 + (seed % 4) as usize),
        SweepClass::I2 => common::gen_i2(rng, 3 + (seed % 4) as usize),
        SweepClass::I4 => common::gen_i4(rng, [6usize, 6, 8, 9][(seed % 4) as usize]),
        SweepClass::I5 => common::gen_i5(rng, 3 + (seed % 4) as usize),
        SweepClass::Segment => common::random_segment_config(rng, 1 + (seed % 6) as usize),
    }
}

fn ceil_to_u64(x: &Scalar) -> u64 {
    x.ceil().to_integer().to_u64().expect("small nonnegative")
}

/// Checkpoint-level monotonicity scan: remaining totals strictly decrease
/// across displacement ticks and never increase otherwise.
fn monotone_checkpoints(trace: &[Event]) -> Result<(), String> {
    let mut prev: Option<Scalar> = None;
    let mut displaced = false;
    for event in trace {
        match event {
            Event::Displaced { .. } => displaced = true,
            Event::Checkpoint {
                tick,
                remaining_total,
                ..
            } => {
                if let Some(prev) = &prev {
                    if displaced && remaining_total >= prev {
                        return Err(format!("no strict decrease at tick {tick}"));
                    }
                    if !displaced && remaining_total != prev {
                        return Err(format!("drift without motion at tick {tick}"));
                    }
                }
                prev = Some(remaining_total.clone());
                displaced = false;
            }
            _ => {}
        }
    }
    Ok(())
}

fn sweep() -> &'static SweepStats {
    static SWEEP: OnceLock<SweepStats> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let mut stats = SweepStats {
            runs: 0,
            convergence_failures: Vec::new(),
            freeze_failures: Vec::new(),
            monotonicity_failures: Vec::new(),
            verified_samples: 0,
        };
        for (ci, &class) in SWEEP_CLASSES.iter().enumerate() {
            for (ai, &adversary) in SWEEP_ADVERSARIES.iter().enumerate() {
                for seed in 0..SWEEP_SEEDS {
                    for (di, delta_div) in [16u64, 100].into_iter().enumerate() {
                        let mut rng = ChaCha8Rng::seed_from_u64(
                            0xE2E + seed * 1000 + (ci as u64) * 100 + (ai as u64) * 10 + di as u64,
                        );
                        let config = generate(class, &mut rng, seed);
                        let n = config.n() as u64;
                        let delta = config.space().extent() / rat(delta_div as i64, 1);
                        let policy = Policy {
                            kind: SchedKind::Async,
                            seed,
                            delta: delta.clone(),
                            fairness_bound: n,
                            adversary,
                            rigid: false,
                        };
                        let algorithm = AlgorithmId::Dispatch;
                        let label = format!(
                            "{class:?}/{adversary}/seed {seed}/delta extent\u{2044}{delta_div}"
                        );
                        // budget: fairness * (ceil(D*/delta) + n + 1)
                        let plan = match move_plan(&config, algorithm) {
                            Ok(p) => p,
                            Err(e) => {
                                stats.convergence_failures.push(format!("{label}: {e}"));
                                continue;
                            }
                        };
                        let optimum: Scalar = plan
                            .targets
                            .as_ref()
                            .map(|ts| {
                                (0..config.n())
                                    .map(|i| match config.space() {
                                        Space::Circle { circumference } => {
                                            minsum_coverage::geometry::arc_distance(
                                                config.position(i),
                                                ts.target_of(i),
                                                circumference,
                                            )
                                        }
                                        Space::Segment { .. } => {
                                            minsum_coverage::geometry::segment_distance(
                                                config.position(i),
                                                ts.target_of(i),
                                            )
                                        }
                                    })
                                    .fold(Scalar::zero(), |acc, d| acc + d)
                            })
                            .unwrap_or_else(Scalar::zero);
                        let budget =
                            policy.fairness_bound * (ceil_to_u64(&(&optimum / &delta)) + n + 1);
                        stats.runs += 1;

                        let report = match run(&config, algorithm, &policy, budget) {
                            Ok(r) => r,
                            Err(e) => {
                                // engine-level invariant violations are
                                // criterion-6 evidence
                                stats.freeze_failures.push(format!("{label}: {e}"));
                                continue;
                            }
                        };
                        match report.outcome {
                            RunOutcome::Converged { .. } => {}
                            ref other => {
                                stats.convergence_failures.push(format!(
                                    "{label}: outcome {other:?} within {budget} ticks"
                                ));
                                continue;
                            }
                        }
                        if report
                            .trace
                            .events
                            .iter()
                            .any(|e| matches!(e, Event::Collision { .. }))
                        {
                            stats
                                .convergence_failures
                                .push(format!("{label}: collision event"));
                        }
                        if report.total_displaced != optimum {
                            stats.convergence_failures.push(format!(
                                "{label}: displaced {} but optimum {}",
                                format_scalar(&report.total_displaced),
                                format_scalar(&optimum)
                            ));
                        }
                        // exact final configuration
                        let frozen = report.frozen.as_ref().expect("solvable runs have targets");
                        let mut final_sorted = report.final_positions.clone();
                        final_sorted.sort();
                        if final_sorted != frozen.sorted_points {
                            stats
                                .convergence_failures
                                .push(format!("{label}: final set differs from targets"));
                        } else if config.space().is_circle() {
                            let cfg =
                                Configuration::new(config.space().clone(), final_sorted).unwrap();
                            if !is_regular_ngon(&cfg) {
                                stats
                                    .convergence_failures
                                    .push(format!("{label}: final set not a regular n-gon"));
                            }
                        }
                        if let Err(e) = monotone_checkpoints(&report.trace.events) {
                            stats.monotonicity_failures.push(format!("{label}: {e}"));
                        }
                        // full independent verification on a sample
                        if seed % 10 == 0 {
                            let scenario = Scenario {
                                config: config.clone(),
                                algorithm,
                                policy: policy.clone(),
                                max_ticks: budget,
                            };
                            let verdict = verify_trace(&scenario, &report.trace);
                            stats.verified_samples += 1;
                            for check in &verdict.checks {
                                if !check.passed {
                                    let target = if check.name == "anchor-invariance" {
                                        &mut stats.freeze_failures
                                    } else if check.name == "cost-monotonicity" {
                                        &mut stats.monotonicity_failures
                                    } else {
                                        &mut stats.convergence_failures
                                    };
                                    target.push(format!(
                                        "{label}: verify {} failed: {}",
                                        check.name, check.detail
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        stats
    })
}

#[test]
fn criterion_5_end_to_end_convergence_and_optimality() {
    let stats = sweep();
    assert!(
        stats.convergence_failures.is_empty(),
        "failures: {:#?}",
        stats.convergence_failures
    );
    pass(
        "5",
        format!(
            "{} runs (6 scenario families x 3 adversaries x 100 seeds x 2 rigidity constants) all converged within the tick budget at exactly the optimal cost with zero collisions",
            stats.runs
        ),
    );
}

#[test]
fn criterion_6_anchor_invariance_every_tick() {
    let stats = sweep();
    assert!(
        stats.freeze_failures.is_empty(),
        "failures: {:#?}",
        stats.freeze_failures
    );
    pass(
        "6",
        format!(
            "frozen destination assignment re-derived and matched on every displacement tick of {} runs (engine checks) plus {} fully re-verified traces",
            stats.runs, stats.verified_samples
        ),
    );
}

#[test]
fn criterion_7_cost_monotonicity() {
    let stats = sweep();
    assert!(
        stats.monotonicity_failures.is_empty(),
        "failures: {:#?}",
        stats.monotonicity_failures
    );
    pass(
        "7",
        format!(
            "remaining distance non-increasing every tick and strictly decreasing across displacement ticks in all {} runs",
            stats.runs
        ),
    );
}

// ---------------------------------------------------------------------
// criterion 8
// ---------------------------------------------------------------------

#[test]
fn criterion_8_refusal_and_impossibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    let i3 = common::gen_i3(&mut rng, 4);
    let i6 = common::gen_i6(&mut rng, 2);
    assert_eq!(analyze(&i3).symmetry.class, ConfigClass::I3);
    assert_eq!(analyze(&i6).symmetry.class, ConfigClass::I6);

    let policy = Policy {
        kind: SchedKind::Async,
        seed: 1,
        delta: rat(1, 16),
        fairness_bound: 4,
        adversary: AdversaryKind::RoundRobin,
        rigid: false,
    };
    for (config, class) in [(&i3, ConfigClass::I3), (&i6, ConfigClass::I6)] {
        let report = run(config, AlgorithmId::Dispatch, &policy, 1000).unwrap();
        assert_eq!(report.outcome, RunOutcome::Refused(class));
        assert!(report.trace.events.is_empty());
    }

    for config in [&i3, &i6] {
        let demo = demo_impossibility(config, 10_000, 7);
        assert!(
            demo.symmetry_persisted(),
            "axes must persist for the whole budget: {demo:?}"
        );
        for algo in &demo.per_algorithm {
            assert!(
                !matches!(algo.outcome, DemoOutcome::Converged { .. }),
                "{:?} must not converge on a refused configuration",
                algo.algorithm
            );
        }
    }

    // control case: a solvable I2 configuration converges under the same adversary
    let i2 = common::gen_i2(&mut rng, 5);
    let demo = demo_impossibility(&i2, 10_000, 7);
    assert_eq!(demo.class, ConfigClass::I2);
    let dispatch = &demo.per_algorithm[0];
    assert!(matches!(dispatch.outcome, DemoOutcome::Converged { .. }));
    assert!(dispatch.axes_retained);

    pass(
        "8",
        "I3 and I6 scenarios refused; all shipped rules kept every axis for 10000 ticks without converging; the I2 control converged".into(),
    );
}

// ---------------------------------------------------------------------
// criterion 9
// ---------------------------------------------------------------------

#[test]
fn criterion_9_determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    for check in 0..50u64 {
        let class = SWEEP_CLASSES[(check % 6) as usize];
        let adversary = SWEEP_ADVERSARIES[(check % 3) as usize];
        let config = generate(class, &mut rng, check);
        let policy = Policy {
            kind: SchedKind::Async,
            seed: check * 31 + 5,
            delta: config.space().extent() / rat(20, 1),
            fairness_bound: config.n() as u64,
            adversary,
            rigid: false,
        };
        let a = run(&config, AlgorithmId::Dispatch, &policy, 200_000).unwrap();
        let b = run(&config, AlgorithmId::Dispatch, &policy, 200_000).unwrap();
        assert_eq!(
            serialize_trace(&a.trace),
            serialize_trace(&b.trace),
            "traces must be byte-identical for {class:?}/{adversary}"
        );
    }
    pass("9", "50 scenario+seed spot checks produced byte-identical traces on re-run".into());
}

// ---------------------------------------------------------------------
// criterion 10
// ---------------------------------------------------------------------

#[test]
fn criterion_10_multiplicity_guard() {
    // duplicate positions are rejected at parse with a dedicated error
    let duplicated = r#"
positions = ["1/4", "1/2", "1/4"]
[space]
kind = "circle"
circumference = "1"
"#;
    match Scenario::parse(duplicated) {
        Err(ScenarioError::Config(
            minsum_coverage::configuration::ConfigError::DuplicatePosition(_),
        )) => {}
        other => panic!("expected duplicate-position error, got {other:?}"),
    }

    // forcing a displacement onto an occupied point must be flagged by the
    // verifier as a collision at the corrupted tick
    let scenario = Scenario::parse(
        r#"
positions = ["0", "1/3", "1/2"]
[space]
kind = "circle"
circumference = "1"
[policy]
kind = "async"
seed = 3
delta = "1/16"
fairness-bound = 3
adversary = "round-robin"
"#,
    )
    .unwrap();
    let report = run(
        &scenario.config,
        scenario.algorithm,
        &scenario.policy,
        scenario.max_ticks,
    )
    .unwrap();
    let mut trace = report.trace.clone();
    let mut corrupted_tick = None;
    for event in trace.events.iter_mut() {
        if let Event::Displaced {
            tick, to, amount, ..
        } = event
        {
            // robot 2 travels clockwise from 1/2 toward 2/3; stretching the
            // displacement to land exactly on the anchor at 0 sweeps through
            // the robot parked at 2/3's clockwise side... land on robot 1
            *to = rat(1, 3);
            *amount = minsum_coverage::geometry::directed_arc(
                &rat(1, 2),
                &rat(1, 3),
                minsum_coverage::geometry::Dir::Cw,
                &int(1),
            );
            corrupted_tick = Some(*tick);
            break;
        }
    }
    let corrupted_tick = corrupted_tick.expect("run has displacements");
    let verdict = verify_trace(&scenario, &trace);
    let collision = verdict
        .checks
        .iter()
        .find(|c| c.name == "collision-freedom")
        .unwrap();
    assert!(!collision.passed);
    assert_eq!(collision.first_violation_tick, Some(corrupted_tick));

    pass(
        "10",
        "duplicate positions rejected at parse; a synthetic displacement onto an occupied point is flagged as a collision at the exact tick".into(),
    );
}
