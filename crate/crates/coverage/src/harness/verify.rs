//! Post-hoc trace verification.
//!
//! The verifier replays a trace against its scenario from first principles:
//! it recomputes positions from displacement events, re-derives the frozen
//! destination assignment, and re-checks every runtime invariant the engine
//! claims to maintain. A corrupted trace is pinpointed by the first
//! violating tick per check.

use crate::algorithms::{move_plan, AnchorSelection, MoveDecision};
use crate::assignment::extremal_set;
use crate::configuration::{is_regular_ngon, Configuration};
use crate::geometry::{
    arc_distance, directed_arc, format_scalar, segment_distance, Path, Scalar, Space,
};
use crate::harness::scenario::Scenario;
use crate::scheduler::{Event, Trace};
use num_traits::Zero;

/// Outcome of one named invariant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub first_violation_tick: Option<u64>,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            name,
            passed: true,
            first_violation_tick: None,
            detail: detail.into(),
        }
    }
}

/// All check results plus the replayed final configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub final_positions: Vec<Scalar>,
    pub converged_tick: Option<u64>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Checker {
    name: &'static str,
    passed: bool,
    first_violation_tick: Option<u64>,
    detail: String,
}

impl Checker {
    fn new(name: &'static str) -> Checker {
        Checker {
            name,
            passed: true,
            first_violation_tick: None,
            detail: String::new(),
        }
    }

    fn fail(&mut self, tick: u64, detail: String) {
        if self.passed {
            self.passed = false;
            self.first_violation_tick = Some(tick);
            self.detail = detail;
        }
    }

    fn into_result(self, ok_detail: &str) -> CheckResult {
        if self.passed {
            CheckResult::pass(self.name, ok_detail)
        } else {
            CheckResult {
                name: self.name,
                passed: false,
                first_violation_tick: self.first_violation_tick,
                detail: self.detail,
            }
        }
    }
}

fn distance_in(space: &Space, from: &Scalar, to: &Scalar) -> Scalar {
    match space {
        Space::Circle { circumference } => arc_distance(from, to, circumference),
        Space::Segment { .. } => segment_distance(from, to),
    }
}

/// Replays `trace` against `scenario` and checks every invariant.
pub fn verify_trace(scenario: &Scenario, trace: &Trace) -> VerificationReport {
    let config = &scenario.config;
    let space = config.space().clone();
    let n = config.n();
    let delta = scenario.policy.delta.clone();
    let fairness = scenario.policy.fairness_bound;

    // Frozen assignment re-derived from the initial snapshot.
    let frozen: Option<Vec<Scalar>> = move_plan(config, scenario.algorithm)
        .ok()
        .and_then(|plan| plan.targets)
        .map(|ts| (0..n).map(|i| ts.target_of(i).clone()).collect());
    let frozen_sorted: Option<Vec<Scalar>> = frozen.as_ref().map(|t| {
        let mut s = t.clone();
        s.sort();
        s
    });

    let mut replay = Checker::new("replay-consistency");
    let mut collision = Checker::new("collision-freedom");
    let mut fairness_check = Checker::new("fairness");
    let mut delta_floor = Checker::new("delta-floor");
    let mut monotone = Checker::new("cost-monotonicity");
    let mut anchor = Checker::new("anchor-invariance");
    let mut regularity = Checker::new("final-regularity");
    let mut optimality = Checker::new("distance-optimality");

    let mut positions: Vec<Scalar> = config.positions().to_vec();
    let mut last_decision: Vec<Option<MoveDecision>> = vec![None; n];
    let mut last_activated: Vec<u64> = vec![0; n];
    let mut total_amount = Scalar::zero();
    let mut converged_tick: Option<u64> = None;
    let mut last_tick: u64 = 0;
    let remaining_now = |positions: &[Scalar]| -> Option<Scalar> {
        frozen.as_ref().map(|targets| {
            positions
                .iter()
                .zip(targets)
                .map(|(p, t)| distance_in(&space, p, t))
                .fold(Scalar::zero(), |acc, d| acc + d)
        })
    };
    let mut prev_checkpoint_remaining = remaining_now(&positions);
    let mut displaced_since_checkpoint = false;

    let check_plan_against_frozen =
        |tick: u64, positions: &[Scalar], anchor: &mut Checker| {
            let (Some(frozen), Some(frozen_sorted)) = (&frozen, &frozen_sorted) else {
                return;
            };
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| positions[a].cmp(&positions[b]));
            let sorted: Vec<Scalar> = order.iter().map(|&id| positions[id].clone()).collect();
            let Ok(cfg) = Configuration::new(space.clone(), sorted) else {
                anchor.fail(tick, "replayed positions collide".into());
                return;
            };
            let Ok(plan) = move_plan(&cfg, scenario.algorithm) else {
                anchor.fail(tick, "decision rule failed on replayed snapshot".into());
                return;
            };
            if matches!(plan.anchor, AnchorSelection::Stuck) {
                anchor.fail(tick, "decision rule could not select an anchor".into());
                return;
            }
            let Some(ts) = plan.targets else {
                anchor.fail(tick, "mid-run snapshot lost its destination set".into());
                return;
            };
            if &ts.sorted_points() != frozen_sorted {
                anchor.fail(tick, "destination point set drifted".into());
                return;
            }
            for (cfg_idx, &id) in order.iter().enumerate() {
                if ts.target_of(cfg_idx) != &frozen[id] {
                    anchor.fail(tick, format!("robot {id} reassigned mid-run"));
                    return;
                }
            }
        };

    check_plan_against_frozen(0, &positions, &mut anchor);

    for event in &trace.events {
        match event {
            Event::Activated { tick, robot } => {
                last_tick = (*tick).max(last_tick);
                if *robot >= n {
                    replay.fail(*tick, format!("unknown robot {robot}"));
                    continue;
                }
                last_activated[*robot] = *tick;
            }
            Event::Snapshot {
                tick,
                robot,
                positions: snap,
            } => {
                last_tick = (*tick).max(last_tick);
                if *robot >= n || snap != &positions {
                    replay.fail(*tick, "snapshot disagrees with replayed positions".into());
                }
            }
            Event::Decided {
                tick,
                robot,
                decision,
            } => {
                last_tick = (*tick).max(last_tick);
                if *robot >= n {
                    replay.fail(*tick, format!("unknown robot {robot}"));
                    continue;
                }
                if let (MoveDecision::Move { destination, .. }, Some(frozen)) =
                    (decision, &frozen)
                {
                    if destination != &frozen[*robot] {
                        anchor.fail(
                            *tick,
                            format!(
                                "robot {robot} decided toward {} instead of its frozen target {}",
                                format_scalar(destination),
                                format_scalar(&frozen[*robot])
                            ),
                        );
                    }
                }
                last_decision[*robot] = Some(decision.clone());
            }
            Event::Displaced {
                tick,
                robot,
                from,
                to,
                amount,
            } => {
                last_tick = (*tick).max(last_tick);
                if *robot >= n {
                    replay.fail(*tick, format!("unknown robot {robot}"));
                    continue;
                }
                if &positions[*robot] != from {
                    replay.fail(
                        *tick,
                        format!("robot {robot} displaced from a stale position"),
                    );
                }
                let Some(MoveDecision::Move { destination, path }) = &last_decision[*robot]
                else {
                    replay.fail(*tick, format!("robot {robot} moved without a decision"));
                    continue;
                };
                // movement geometry and the rigidity floor
                let (consistent, remaining_before) = match (&space, path) {
                    (Space::Circle { circumference }, Path::Arc(dir)) => {
                        let travelled = directed_arc(from, to, *dir, circumference);
                        let rem = directed_arc(from, destination, *dir, circumference);
                        (&travelled == amount, rem)
                    }
                    (Space::Segment { .. }, Path::Interval) => {
                        let rem = segment_distance(from, destination);
                        let toward = (destination > from && to > from && to <= destination)
                            || (destination < from && to < from && to >= destination);
                        (toward && &segment_distance(from, to) == amount, rem)
                    }
                    _ => (false, Scalar::zero()),
                };
                if !consistent {
                    replay.fail(
                        *tick,
                        format!("robot {robot} displacement not along its decided path"),
                    );
                }
                if amount > &remaining_before {
                    delta_floor.fail(
                        *tick,
                        format!("robot {robot} overshot its destination"),
                    );
                } else {
                    let floor = std::cmp::min(&delta, &remaining_before).clone();
                    if amount < &floor {
                        delta_floor.fail(
                            *tick,
                            format!(
                                "robot {robot} advanced {} (< min(delta, remaining) = {})",
                                format_scalar(amount),
                                format_scalar(&floor)
                            ),
                        );
                    }
                }
                // swept-path collision check against live positions
                for other in 0..n {
                    if other == *robot {
                        continue;
                    }
                    let p = &positions[other];
                    let hit = match (&space, path) {
                        (Space::Circle { circumference }, Path::Arc(dir)) => {
                            let d = directed_arc(from, p, *dir, circumference);
                            !d.is_zero() && d <= *amount
                        }
                        (Space::Segment { .. }, Path::Interval) => {
                            let (lo, hi) = if from < to { (from, to) } else { (to, from) };
                            (p > lo && p < hi) || p == to
                        }
                        _ => false,
                    };
                    if hit {
                        collision.fail(
                            *tick,
                            format!(
                                "robot {robot} swept through robot {other} at {}",
                                format_scalar(p)
                            ),
                        );
                    }
                }
                positions[*robot] = to.clone();
                total_amount += amount;
                displaced_since_checkpoint = true;
                last_activated[*robot] = *tick;
            }
            Event::Collision { tick, .. } => {
                collision.fail(*tick, "trace records a collision".into());
            }
            Event::Checkpoint {
                tick,
                extremal,
                remaining_total,
            } => {
                last_tick = (*tick).max(last_tick);
                let recomputed = remaining_now(&positions);
                if let Some(recomputed) = &recomputed {
                    if recomputed != remaining_total {
                        monotone.fail(
                            *tick,
                            format!(
                                "checkpoint remaining {} but replay gives {}",
                                format_scalar(remaining_total),
                                format_scalar(recomputed)
                            ),
                        );
                    }
                    if let Some(prev) = &prev_checkpoint_remaining {
                        if displaced_since_checkpoint && recomputed >= prev {
                            monotone.fail(
                                *tick,
                                "remaining distance failed to decrease across a displacement tick"
                                    .into(),
                            );
                        }
                        if !displaced_since_checkpoint && recomputed != prev {
                            monotone.fail(*tick, "remaining distance changed without motion".into());
                        }
                    }
                    prev_checkpoint_remaining = Some(recomputed.clone());
                }
                displaced_since_checkpoint = false;
                check_plan_against_frozen(*tick, &positions, &mut anchor);
                if space.is_circle() && *tick > 0 {
                    // recompute the extremal set on the replayed snapshot
                    let mut sorted = positions.clone();
                    sorted.sort();
                    if let Ok(cfg) = Configuration::new(space.clone(), sorted) {
                        let mut order: Vec<usize> = (0..n).collect();
                        order.sort_by(|&a, &b| positions[a].cmp(&positions[b]));
                        let mut expected: Vec<usize> = extremal_set(&cfg)
                            .extremal
                            .into_iter()
                            .map(|idx| order[idx])
                            .collect();
                        expected.sort();
                        let mut got = extremal.clone();
                        got.sort();
                        if got != expected {
                            anchor.fail(*tick, "checkpoint extremal set disagrees".into());
                        }
                    }
                }
            }
            Event::Converged { tick } => {
                last_tick = (*tick).max(last_tick);
                converged_tick = Some(*tick);
            }
        }
    }

    // fairness over the live portion of the run
    let end = converged_tick.unwrap_or(last_tick);
    for robot in 0..n {
        let mut activations: Vec<u64> = vec![0];
        for event in &trace.events {
            if let Event::Activated { tick, robot: r } = event {
                if r == &robot {
                    activations.push(*tick);
                }
            }
        }
        activations.push(end);
        for pair in activations.windows(2) {
            if pair[1].saturating_sub(pair[0]) > fairness {
                fairness_check.fail(
                    pair[0] + fairness,
                    format!("robot {robot} starved for more than {fairness} ticks"),
                );
                break;
            }
        }
    }

    // terminal checks
    if let Some(tick) = converged_tick {
        if let Some(frozen) = &frozen {
            let mut want = frozen.clone();
            want.sort();
            let mut got = positions.clone();
            got.sort();
            if got != want {
                regularity.fail(tick, "final configuration is not the frozen target set".into());
            } else if space.is_circle() {
                let cfg = Configuration::new(space.clone(), got).expect("distinct targets");
                if !is_regular_ngon(&cfg) {
                    regularity.fail(tick, "final configuration is not a regular n-gon".into());
                }
            }
            let expected_total = remaining_now(config.positions()).expect("frozen exists");
            if total_amount != expected_total {
                optimality.fail(
                    tick,
                    format!(
                        "total displaced {} but the optimal cost is {}",
                        format_scalar(&total_amount),
                        format_scalar(&expected_total)
                    ),
                );
            }
        } else {
            regularity.fail(tick, "converged without a destination assignment".into());
        }
    }

    let final_positions = positions;
    VerificationReport {
        checks: vec![
            replay.into_result("replay reproduces every displacement"),
            collision.into_result("no displacement sweeps an occupied point"),
            fairness_check.into_result("every robot is activated in every fairness window"),
            delta_floor.into_result("every displacement respects the rigidity floor"),
            monotone.into_result("remaining distance is monotone and strictly decreases on motion"),
            anchor.into_result("destination assignment stays frozen at every checkpoint"),
            regularity.into_result("final configuration is exactly the target set"),
            optimality.into_result("total displaced distance equals the optimal cost"),
        ],
        final_positions,
        converged_tick,
    }
}
