//! Symmetry-persistence demonstration for the unsolvable classes.
//!
//! For a refused scenario this drives every shipped circle rule under the
//! symmetry-preserving adversary (bypassing the usual refusal) and reports,
//! per rule, whether any initial reflection axis was ever lost and whether
//! the run converged within the budget. It is a falsification harness over a
//! finite budget, not a proof: it shows that the shipped rules keep such
//! configurations symmetric and never form the target n-gon.

use crate::algorithms::{analyze, AlgorithmId};
use crate::configuration::{Axis, ConfigClass, Configuration};
use crate::geometry::{Scalar, Space};
use crate::scheduler::{
    run_opt, AdversaryKind, Event, Policy, RunError, RunOptions, RunOutcome, SchedKind, Trace,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemoOutcome {
    /// Ran the whole budget without converging.
    NeverConverged,
    Converged { tick: u64 },
    /// The rule refused the snapshot outright (precondition error).
    RuleError(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgoDemo {
    pub algorithm: AlgorithmId,
    pub outcome: DemoOutcome,
    /// True when every initial axis mapped every intermediate configuration
    /// onto itself, at every tick of the run.
    pub axes_retained: bool,
    pub displacements: u64,
    pub ticks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub class: ConfigClass,
    pub axes: Vec<Axis>,
    pub budget: u64,
    pub per_algorithm: Vec<AlgoDemo>,
}

impl DemoReport {
    /// The demonstration succeeds when no rule converged and no rule ever
    /// broke an axis.
    pub fn symmetry_persisted(&self) -> bool {
        self.per_algorithm.iter().all(|d| {
            d.axes_retained && !matches!(d.outcome, DemoOutcome::Converged { .. })
        })
    }
}

/// Axis retention over a replayed trace: after each tick's displacements,
/// every axis in `axes` must still map the position multiset onto itself.
fn axes_retained(
    config: &Configuration,
    trace: &Trace,
    axes: &[Axis],
    circumference: &Scalar,
) -> bool {
    let reflect_closed = |positions: &[Scalar]| -> bool {
        axes.iter().all(|axis| {
            let mut reflected: Vec<Scalar> = positions
                .iter()
                .map(|p| axis.reflect(p, circumference))
                .collect();
            reflected.sort();
            let mut sorted = positions.to_vec();
            sorted.sort();
            reflected == sorted
        })
    };
    let mut positions: Vec<Scalar> = config.positions().to_vec();
    if !reflect_closed(&positions) {
        return false;
    }
    let mut pending_tick: Option<u64> = None;
    for event in &trace.events {
        if let Event::Displaced {
            tick, robot, to, ..
        } = event
        {
            if let Some(t) = pending_tick {
                if t != *tick && !reflect_closed(&positions) {
                    return false;
                }
            }
            positions[*robot] = to.clone();
            pending_tick = Some(*tick);
        }
    }
    reflect_closed(&positions)
}

/// Runs the demonstration on one configuration.
pub fn demo_impossibility(config: &Configuration, budget: u64, seed: u64) -> DemoReport {
    let analysis = analyze(config);
    let axes = analysis.symmetry.lines_of_symmetry.clone();
    let circumference = match config.space() {
        Space::Circle { circumference } => circumference.clone(),
        Space::Segment { .. } => panic!("impossibility demo applies to circle scenarios"),
    };
    let policy = Policy {
        kind: SchedKind::Async,
        seed,
        delta: config.space().extent() / crate::geometry::rat(16, 1),
        fairness_bound: config.n() as u64,
        adversary: AdversaryKind::SymmetryPreserving,
        rigid: false,
    };
    let options = RunOptions {
        refuse_unsolvable: false,
        record_snapshots: false,
    };

    let per_algorithm = AlgorithmId::CIRCLE
        .iter()
        .map(|&algorithm| {
            match run_opt(config, algorithm, &policy, budget, options) {
                Err(RunError::Decide(err)) => AlgoDemo {
                    algorithm,
                    outcome: DemoOutcome::RuleError(err.to_string()),
                    axes_retained: true,
                    displacements: 0,
                    ticks: 0,
                },
                Err(err) => AlgoDemo {
                    algorithm,
                    outcome: DemoOutcome::RuleError(err.to_string()),
                    axes_retained: false,
                    displacements: 0,
                    ticks: 0,
                },
                Ok(report) => {
                    let displacements = report
                        .trace
                        .events
                        .iter()
                        .filter(|e| matches!(e, Event::Displaced { .. }))
                        .count() as u64;
                    let retained = axes_retained(config, &report.trace, &axes, &circumference);
                    let outcome = match report.outcome {
                        RunOutcome::Converged { tick } => DemoOutcome::Converged { tick },
                        _ => DemoOutcome::NeverConverged,
                    };
                    AlgoDemo {
                        algorithm,
                        outcome,
                        axes_retained: retained,
                        displacements,
                        ticks: report.ticks,
                    }
                }
            }
        })
        .collect();

    DemoReport {
        class: analysis.symmetry.class,
        axes,
        budget,
        per_algorithm,
    }
}
