//! Adversarial execution engine.
//!
//! A run advances in discrete ticks. Each tick the adversary chooses which
//! idle robots perform Look+Compute and how far each pending move advances;
//! a displacement is always at least `min(delta, remaining)` and at most the
//! full remaining distance. Under `Fsync`/`Ssync` the chosen robots complete
//! whole atomic cycles per tick (all of them snapshot the same configuration
//! before anyone moves); under `Async` the phases persist across ticks, so
//! robots act on stale snapshots.
//!
//! The engine is deterministic: all adversary randomness comes from a
//! ChaCha stream seeded by the policy, so identical inputs produce
//! bit-identical traces. Every tick that displaces a robot emits an
//! invariant checkpoint, and the engine itself verifies on the fly that the
//! destination assignment stays frozen, that total remaining distance
//! strictly decreases, and that no robot is ever swept into another.

use crate::algorithms::{
    move_plan, AlgorithmId, AnchorSelection, DecideError, MoveDecision, MovePlan,
};
use crate::assignment::extremal_set;
use crate::configuration::{ConfigClass, Configuration};
use crate::geometry::{
    arc_distance, directed_arc, normalize, segment_distance, Dir, Path, Scalar, Space,
};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Scheduler synchrony model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedKind {
    Fsync,
    Ssync,
    Async,
}

impl fmt::Display for SchedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedKind::Fsync => write!(f, "fsync"),
            SchedKind::Ssync => write!(f, "ssync"),
            SchedKind::Async => write!(f, "async"),
        }
    }
}

impl FromStr for SchedKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fsync" => Ok(SchedKind::Fsync),
            "ssync" => Ok(SchedKind::Ssync),
            "async" => Ok(SchedKind::Async),
            other => Err(format!("unknown scheduler kind `{other}`")),
        }
    }
}

/// Adversary flavors.
///
/// `RoundRobin` runs one whole cycle per tick in rotating order.
/// `SeededRandom` activates random subsets with random legal displacements.
/// `SymmetryPreserving` co-activates everyone and always grants full
/// displacements, so symmetric snapshots stay symmetric.
/// `PendingMaximizer` advances the lowest-indexed pending mover one
/// rigidity quantum at a time and freezes its co-movers for as long as the
/// fairness bound allows, stressing the symmetry-broken fallback paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    RoundRobin,
    SeededRandom,
    SymmetryPreserving,
    PendingMaximizer,
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AdversaryKind::RoundRobin => "round-robin",
            AdversaryKind::SeededRandom => "seeded-random",
            AdversaryKind::SymmetryPreserving => "symmetry-preserving",
            AdversaryKind::PendingMaximizer => "pending-maximizer",
        };
        write!(f, "{name}")
    }
}

impl FromStr for AdversaryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "round-robin" => Ok(AdversaryKind::RoundRobin),
            "seeded-random" => Ok(AdversaryKind::SeededRandom),
            "symmetry-preserving" => Ok(AdversaryKind::SymmetryPreserving),
            "pending-maximizer" => Ok(AdversaryKind::PendingMaximizer),
            other => Err(format!("unknown adversary `{other}`")),
        }
    }
}

/// Full scheduling policy of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub kind: SchedKind,
    pub seed: u64,
    /// Rigidity constant: a started move advances at least this far (or to
    /// the destination). Known to the engine, never to the decision rules.
    pub delta: Scalar,
    /// Every robot is activated at least once in any window of this many ticks.
    pub fairness_bound: u64,
    pub adversary: AdversaryKind,
    /// `Fsync` only: full displacement every round.
    pub rigid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolicyError {
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error("fairness bound must be at least 1")]
    ZeroFairness,
    #[error("the pending-maximizer adversary requires the async scheduler")]
    PendingMaximizerRequiresAsync,
}

impl Policy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        if !self.delta.is_positive() {
            return Err(PolicyError::NonPositiveDelta);
        }
        if self.fairness_bound == 0 {
            return Err(PolicyError::ZeroFairness);
        }
        if self.adversary == AdversaryKind::PendingMaximizer && self.kind != SchedKind::Async {
            return Err(PolicyError::PendingMaximizerRequiresAsync);
        }
        Ok(())
    }
}

/// Per-robot cycle phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Computed {
        decision: MoveDecision,
        snapshot_tick: u64,
    },
    Moving {
        decision: MoveDecision,
        remaining: Scalar,
    },
}

impl Phase {
    fn pending(&self) -> bool {
        !matches!(self, Phase::Idle)
    }
}

/// Trace events, in emission order. Robots are identified by their index in
/// the sorted initial configuration; that identity is stable for the whole
/// run even when coordinates wrap past the circle origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Activated {
        tick: u64,
        robot: usize,
    },
    Snapshot {
        tick: u64,
        robot: usize,
        positions: Vec<Scalar>,
    },
    Decided {
        tick: u64,
        robot: usize,
        decision: MoveDecision,
    },
    Displaced {
        tick: u64,
        robot: usize,
        from: Scalar,
        to: Scalar,
        amount: Scalar,
    },
    Collision {
        tick: u64,
        position: Scalar,
        robots: Vec<usize>,
    },
    Checkpoint {
        tick: u64,
        extremal: Vec<usize>,
        remaining_total: Scalar,
    },
    Converged {
        tick: u64,
    },
}

/// Ordered event log of one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<Event>,
}

/// Why the run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Converged { tick: u64 },
    TickBudgetExceeded,
    Refused(ConfigClass),
    Collision { tick: u64 },
}

/// The destination assignment fixed at the start of the run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenPlan {
    /// Target coordinate per robot id.
    pub targets: Vec<Scalar>,
    /// The same points, sorted, for set comparisons.
    pub sorted_points: Vec<Scalar>,
    pub anchor: AnchorSelection,
    /// Total distance to targets at tick 0 (`D*` for circle dispatch runs).
    pub optimal_cost: Scalar,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub outcome: RunOutcome,
    /// Final position per robot id.
    pub final_positions: Vec<Scalar>,
    pub trace: Trace,
    pub total_displaced: Scalar,
    pub ticks: u64,
    pub frozen: Option<FrozenPlan>,
    pub initial_class: Option<ConfigClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error("invariant violated at tick {tick}: {message}")]
    Invariant { tick: u64, message: String },
}

/// How far an advance goes; resolved against the live remaining distance.
#[derive(Debug, Clone, Copy)]
enum Advance {
    Full,
    DeltaFloor,
    Fraction(u32, u32),
}

impl Advance {
    fn amount(&self, delta: &Scalar, remaining: &Scalar) -> Scalar {
        let floor = delta.min(remaining).clone();
        match self {
            Advance::Full => remaining.clone(),
            Advance::DeltaFloor => floor,
            Advance::Fraction(num, den) => {
                let x = remaining * crate::geometry::rat(*num as i64, *den as i64);
                x.max(floor)
            }
        }
    }
}

/// One tick's adversary choices.
#[derive(Debug, Default)]
struct TickPlan {
    /// Atomic Look+Compute+Move cycles (fsync/ssync).
    cycles: Vec<(usize, Advance)>,
    /// Async Look+Compute activations.
    looks: Vec<usize>,
    /// Async advances of pending moves.
    advances: Vec<(usize, Advance)>,
}

struct RobotState {
    position: Scalar,
    phase: Phase,
    last_activated: u64,
}

struct Sim {
    space: Space,
    algorithm: AlgorithmId,
    policy: Policy,
    robots: Vec<RobotState>,
    tick: u64,
    rng: ChaCha8Rng,
    trace: Trace,
    total_displaced: Scalar,
    frozen: Option<FrozenPlan>,
    initial_class: Option<ConfigClass>,
    /// Bumped on every displacement; keys the decision-plan cache.
    generation: u64,
    plan_cache: Option<(u64, MovePlan, Vec<usize>)>,
    remaining_total: Scalar,
    rr_pointer: usize,
    collision: Option<u64>,
    record_snapshots: bool,
}

/// Knobs for special harness runs; ordinary runs use the defaults.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Refuse unsolvable circle classes before activating anyone.
    pub refuse_unsolvable: bool,
    /// Record full position snapshots on every Look. The impossibility
    /// demonstration turns this off to keep ten-thousand-tick traces small.
    pub record_snapshots: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            refuse_unsolvable: true,
            record_snapshots: true,
        }
    }
}

/// Runs a scenario to completion. Circle configurations in the unsolvable
/// classes are refused before any robot is activated.
pub fn run(
    config: &Configuration,
    algorithm: AlgorithmId,
    policy: &Policy,
    max_ticks: u64,
) -> Result<RunReport, RunError> {
    run_opt(config, algorithm, policy, max_ticks, RunOptions::default())
}

/// Like [`run`] with explicit [`RunOptions`].
pub fn run_opt(
    config: &Configuration,
    algorithm: AlgorithmId,
    policy: &Policy,
    max_ticks: u64,
    options: RunOptions,
) -> Result<RunReport, RunError> {
    policy.validate()?;

    let initial_class = if config.space().is_circle() {
        Some(crate::algorithms::analyze(config).symmetry.class)
    } else {
        None
    };
    if options.refuse_unsolvable {
        if let Some(class) = initial_class {
            if !class.solvable() {
                return Ok(RunReport {
                    outcome: RunOutcome::Refused(class),
                    final_positions: config.positions().to_vec(),
                    trace: Trace::default(),
                    total_displaced: Scalar::zero(),
                    ticks: 0,
                    frozen: None,
                    initial_class,
                });
            }
        }
    }

    // Freeze the destination assignment from the initial snapshot. Robot ids
    // coincide with sorted indices at tick 0.
    let t0_plan = move_plan(config, algorithm)?;
    let frozen = t0_plan.targets.as_ref().map(|ts| {
        let targets: Vec<Scalar> = (0..config.n()).map(|i| ts.target_of(i).clone()).collect();
        let optimal_cost = targets
            .iter()
            .zip(config.positions())
            .map(|(t, p)| distance_in(config.space(), p, t))
            .fold(Scalar::zero(), |acc, d| acc + d);
        FrozenPlan {
            sorted_points: ts.sorted_points(),
            targets,
            anchor: t0_plan.anchor.clone(),
            optimal_cost,
        }
    });

    let remaining_total = frozen
        .as_ref()
        .map(|f| f.optimal_cost.clone())
        .unwrap_or_else(Scalar::zero);

    let mut sim = Sim {
        space: config.space().clone(),
        algorithm,
        policy: policy.clone(),
        robots: config
            .positions()
            .iter()
            .map(|p| RobotState {
                position: p.clone(),
                phase: Phase::Idle,
                last_activated: 0,
            })
            .collect(),
        tick: 0,
        rng: ChaCha8Rng::seed_from_u64(policy.seed),
        trace: Trace::default(),
        total_displaced: Scalar::zero(),
        frozen,
        initial_class,
        generation: 0,
        plan_cache: None,
        remaining_total,
        rr_pointer: 0,
        collision: None,
        record_snapshots: options.record_snapshots,
    };

    sim.emit_checkpoint()?;
    if sim.converged() {
        sim.trace.events.push(Event::Converged { tick: 0 });
        return Ok(sim.into_report(RunOutcome::Converged { tick: 0 }));
    }

    while sim.tick < max_ticks {
        sim.tick += 1;
        let plan = sim.plan_tick();
        sim.execute(plan)?;
        if let Some(tick) = sim.collision {
            return Ok(sim.into_report(RunOutcome::Collision { tick }));
        }
        if sim.converged() {
            let tick = sim.tick;
            sim.trace.events.push(Event::Converged { tick });
            return Ok(sim.into_report(RunOutcome::Converged { tick }));
        }
    }
    Ok(sim.into_report(RunOutcome::TickBudgetExceeded))
}

fn distance_in(space: &Space, from: &Scalar, to: &Scalar) -> Scalar {
    match space {
        Space::Circle { circumference } => arc_distance(from, to, circumference),
        Space::Segment { .. } => segment_distance(from, to),
    }
}

impl Sim {
    fn n(&self) -> usize {
        self.robots.len()
    }

    fn into_report(self, outcome: RunOutcome) -> RunReport {
        RunReport {
            outcome,
            final_positions: self.robots.iter().map(|r| r.position.clone()).collect(),
            trace: self.trace,
            total_displaced: self.total_displaced,
            ticks: self.tick,
            frozen: self.frozen,
            initial_class: self.initial_class,
        }
    }

    fn converged(&self) -> bool {
        let Some(frozen) = &self.frozen else {
            return false;
        };
        self.robots.iter().enumerate().all(|(id, r)| {
            matches!(r.phase, Phase::Idle) && r.position == frozen.targets[id]
        })
    }

    /// Current configuration plus the sorted-index -> robot-id map.
    fn configuration(&self) -> (Configuration, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.robots[a].position.cmp(&self.robots[b].position));
        let positions: Vec<Scalar> = order
            .iter()
            .map(|&id| self.robots[id].position.clone())
            .collect();
        let config = Configuration::new(self.space.clone(), positions)
            .expect("live positions stay distinct and in range");
        (config, order)
    }

    /// Decision plan for the current configuration, cached per generation.
    fn ensure_plan(&mut self) -> Result<(), RunError> {
        if self
            .plan_cache
            .as_ref()
            .map(|(gen, _, _)| *gen == self.generation)
            .unwrap_or(false)
        {
            return Ok(());
        }
        let (config, order) = self.configuration();
        let plan = move_plan(&config, self.algorithm)?;
        self.check_plan_freeze(&plan, &order)?;
        self.plan_cache = Some((self.generation, plan, order));
        Ok(())
    }

    /// Target-set freeze: every plan computed mid-run must drive toward the
    /// destination assignment frozen at tick 0.
    fn check_plan_freeze(&self, plan: &MovePlan, order: &[usize]) -> Result<(), RunError> {
        let (Some(frozen), Some(ts)) = (&self.frozen, &plan.targets) else {
            return Ok(());
        };
        if matches!(plan.anchor, AnchorSelection::Stuck) {
            return Ok(());
        }
        if ts.sorted_points() != frozen.sorted_points {
            return Err(RunError::Invariant {
                tick: self.tick,
                message: "destination point set drifted from the frozen assignment".into(),
            });
        }
        for (cfg_idx, &id) in order.iter().enumerate() {
            if ts.target_of(cfg_idx) != &frozen.targets[id] {
                return Err(RunError::Invariant {
                    tick: self.tick,
                    message: format!("robot {id} was reassigned away from its frozen target"),
                });
            }
        }
        if let AnchorSelection::Anchored(a) = plan.anchor {
            let anchor_pos = ts.points[0].clone();
            debug_assert_eq!(&anchor_pos, ts.target_of(a));
            if !frozen.sorted_points.contains(&anchor_pos) {
                return Err(RunError::Invariant {
                    tick: self.tick,
                    message: "anchor robot is not on a frozen vertex".into(),
                });
            }
        }
        Ok(())
    }

    fn decision_for(&mut self, id: usize) -> Result<MoveDecision, RunError> {
        self.ensure_plan()?;
        let (_, plan, order) = self.plan_cache.as_ref().expect("plan just ensured");
        let cfg_idx = order
            .iter()
            .position(|&r| r == id)
            .expect("robot id present");
        Ok(plan.decisions[cfg_idx].clone())
    }

    fn positions_by_id(&self) -> Vec<Scalar> {
        self.robots.iter().map(|r| r.position.clone()).collect()
    }

    fn gap(&self, id: usize) -> u64 {
        self.tick.saturating_sub(self.robots[id].last_activated)
    }

    // ------------------------------------------------------------------
    // adversary planning
    // ------------------------------------------------------------------

    fn plan_tick(&mut self) -> TickPlan {
        match self.policy.kind {
            SchedKind::Fsync => self.plan_round(true),
            SchedKind::Ssync => self.plan_round(false),
            SchedKind::Async => self.plan_async(),
        }
    }

    /// Fsync/Ssync rounds: pick the activated subset and a displacement
    /// choice per member.
    fn plan_round(&mut self, all: bool) -> TickPlan {
        debug_assert!(self.robots.iter().all(|r| !r.phase.pending()));
        let n = self.n();
        let members: Vec<usize> = if all {
            (0..n).collect()
        } else {
            match self.policy.adversary {
                AdversaryKind::RoundRobin => {
                    let r = self.rr_pointer % n;
                    self.rr_pointer = (self.rr_pointer + 1) % n;
                    vec![r]
                }
                AdversaryKind::SymmetryPreserving => (0..n).collect(),
                AdversaryKind::SeededRandom | AdversaryKind::PendingMaximizer => {
                    let mut chosen: Vec<usize> =
                        (0..n).filter(|_| self.rng.gen_bool(0.5)).collect();
                    for id in 0..n {
                        if self.gap(id) >= self.policy.fairness_bound && !chosen.contains(&id) {
                            chosen.push(id);
                        }
                    }
                    if chosen.is_empty() {
                        chosen.push((0..n).max_by_key(|&id| self.gap(id)).expect("n >= 1"));
                    }
                    chosen.sort();
                    chosen
                }
            }
        };
        let rigid = self.policy.rigid && self.policy.kind == SchedKind::Fsync;
        let cycles = members
            .into_iter()
            .map(|id| {
                let choice = if rigid {
                    Advance::Full
                } else {
                    match self.policy.adversary {
                        AdversaryKind::SeededRandom => self.random_advance(),
                        _ => Advance::Full,
                    }
                };
                (id, choice)
            })
            .collect();
        TickPlan {
            cycles,
            ..TickPlan::default()
        }
    }

    fn random_advance(&mut self) -> Advance {
        if self.rng.gen_bool(0.5) {
            Advance::DeltaFloor
        } else {
            Advance::Fraction(self.rng.gen_range(1..=16), 16)
        }
    }

    fn plan_async(&mut self) -> TickPlan {
        let n = self.n();
        let mut plan = TickPlan::default();
        match self.policy.adversary {
            AdversaryKind::RoundRobin => {
                // one whole cycle per tick, rotating
                let id = self.rr_pointer % n;
                self.rr_pointer = (self.rr_pointer + 1) % n;
                match self.robots[id].phase {
                    Phase::Idle => {
                        plan.looks.push(id);
                        // if the look decides a move, carry it out in full
                        plan.advances.push((id, Advance::Full));
                    }
                    _ => plan.advances.push((id, Advance::Full)),
                }
            }
            AdversaryKind::SymmetryPreserving => {
                for id in 0..n {
                    match self.robots[id].phase {
                        Phase::Idle => plan.looks.push(id),
                        _ => plan.advances.push((id, Advance::Full)),
                    }
                }
            }
            AdversaryKind::SeededRandom => {
                for id in 0..n {
                    let forced = self.gap(id) >= self.policy.fairness_bound;
                    match self.robots[id].phase {
                        Phase::Idle => {
                            if forced || self.rng.gen_bool(0.5) {
                                plan.looks.push(id);
                            }
                        }
                        _ => {
                            if forced || self.rng.gen_bool(0.75) {
                                let adv = self.random_advance();
                                plan.advances.push((id, adv));
                            }
                        }
                    }
                }
                if plan.looks.is_empty() && plan.advances.is_empty() {
                    let id = (0..n).max_by_key(|&id| self.gap(id)).expect("n >= 1");
                    match self.robots[id].phase {
                        Phase::Idle => plan.looks.push(id),
                        _ => plan.advances.push((id, Advance::DeltaFloor)),
                    }
                }
            }
            AdversaryKind::PendingMaximizer => {
                let pending: Vec<usize> =
                    (0..n).filter(|&id| self.robots[id].phase.pending()).collect();
                if pending.is_empty() {
                    // fresh designation: everyone looks at the same snapshot
                    plan.looks = (0..n).collect();
                } else {
                    let favored = pending[0];
                    plan.advances.push((favored, Advance::DeltaFloor));
                    for &id in &pending[1..] {
                        if self.gap(id) >= self.policy.fairness_bound {
                            plan.advances.push((id, Advance::DeltaFloor));
                        }
                    }
                    for id in 0..n {
                        if !self.robots[id].phase.pending()
                            && self.gap(id) >= self.policy.fairness_bound
                        {
                            plan.looks.push(id);
                        }
                    }
                }
            }
        }
        plan
    }

    // ------------------------------------------------------------------
    // execution
    // ------------------------------------------------------------------

    fn execute(&mut self, plan: TickPlan) -> Result<(), RunError> {
        let mut displaced_this_tick = false;

        // Atomic rounds: simultaneous snapshots first, then the moves.
        if !plan.cycles.is_empty() {
            let mut staged: Vec<(usize, MoveDecision, Advance)> = Vec::new();
            for &(id, choice) in &plan.cycles {
                let decision = self.look(id)?;
                if decision.is_move() {
                    staged.push((id, decision, choice));
                }
                self.robots[id].phase = Phase::Idle;
            }
            for (id, decision, choice) in staged {
                if self.collision.is_some() {
                    break;
                }
                self.robots[id].phase = Phase::Computed {
                    decision,
                    snapshot_tick: self.tick,
                };
                displaced_this_tick |= self.advance(id, choice)?;
                // the cycle is atomic: whatever distance was granted, the
                // robot finishes the cycle idle and oblivious
                self.robots[id].phase = Phase::Idle;
            }
        }

        for &id in &plan.looks {
            if self.collision.is_some() {
                break;
            }
            if !matches!(self.robots[id].phase, Phase::Idle) {
                continue;
            }
            let decision = self.look(id)?;
            if decision.is_move() {
                self.robots[id].phase = Phase::Computed {
                    decision,
                    snapshot_tick: self.tick,
                };
            }
        }

        for &(id, choice) in &plan.advances {
            if self.collision.is_some() {
                break;
            }
            if self.robots[id].phase.pending() {
                displaced_this_tick |= self.advance(id, choice)?;
            }
        }

        if displaced_this_tick {
            self.emit_checkpoint()?;
        }
        Ok(())
    }

    /// Look+Compute for one robot: snapshot the current configuration and
    /// derive the decision from it.
    fn look(&mut self, id: usize) -> Result<MoveDecision, RunError> {
        let tick = self.tick;
        self.robots[id].last_activated = tick;
        self.trace.events.push(Event::Activated { tick, robot: id });
        if self.record_snapshots {
            self.trace.events.push(Event::Snapshot {
                tick,
                robot: id,
                positions: self.positions_by_id(),
            });
        }
        let decision = self.decision_for(id)?;
        self.trace.events.push(Event::Decided {
            tick,
            robot: id,
            decision: decision.clone(),
        });
        Ok(decision)
    }

    /// Advances a pending move by the chosen amount. Returns true when a
    /// displacement happened.
    fn advance(&mut self, id: usize, choice: Advance) -> Result<bool, RunError> {
        let tick = self.tick;
        self.robots[id].last_activated = tick;
        let decision = match &self.robots[id].phase {
            Phase::Computed { decision, .. } | Phase::Moving { decision, .. } => decision.clone(),
            Phase::Idle => return Ok(false),
        };
        let MoveDecision::Move { destination, path } = decision.clone() else {
            self.robots[id].phase = Phase::Idle;
            return Ok(false);
        };
        self.trace.events.push(Event::Activated { tick, robot: id });

        let from = self.robots[id].position.clone();
        let remaining = match (&self.space, path) {
            (Space::Circle { circumference }, Path::Arc(dir)) => {
                directed_arc(&from, &destination, dir, circumference)
            }
            (Space::Segment { .. }, Path::Interval) => segment_distance(&from, &destination),
            _ => unreachable!("decision path matches the space"),
        };
        if remaining.is_zero() {
            self.robots[id].phase = Phase::Idle;
            return Ok(false);
        }
        let amount = choice.amount(&self.policy.delta, &remaining);
        debug_assert!(amount.is_positive() && amount <= remaining);
        debug_assert!(&amount >= std::cmp::min(&self.policy.delta, &remaining));

        let to = match (&self.space, path) {
            (Space::Circle { circumference }, Path::Arc(Dir::Cw)) => {
                normalize(&(&from + &amount), circumference)
            }
            (Space::Circle { circumference }, Path::Arc(Dir::Ccw)) => {
                normalize(&(&from - &amount), circumference)
            }
            (Space::Segment { .. }, Path::Interval) => {
                if destination > from {
                    &from + &amount
                } else {
                    &from - &amount
                }
            }
            _ => unreachable!(),
        };

        // Swept-path collision check against everybody else's live position:
        // landing on or passing through an occupied point aborts the run.
        for other in 0..self.n() {
            if other == id {
                continue;
            }
            let p = &self.robots[other].position;
            let hit = match (&self.space, path) {
                (Space::Circle { circumference }, Path::Arc(dir)) => {
                    let d = directed_arc(&from, p, dir, circumference);
                    !d.is_zero() && d <= amount
                }
                (Space::Segment { .. }, Path::Interval) => {
                    let (lo, hi) = if from < to {
                        (&from, &to)
                    } else {
                        (&to, &from)
                    };
                    (p > lo && p < hi) || p == &to
                }
                _ => unreachable!(),
            };
            if hit {
                self.trace.events.push(Event::Collision {
                    tick,
                    position: p.clone(),
                    robots: vec![id, other],
                });
                self.collision = Some(tick);
                return Ok(false);
            }
        }

        self.robots[id].position = to.clone();
        self.generation += 1;
        self.total_displaced += &amount;
        self.remaining_total -= &amount;
        let new_remaining = &remaining - &amount;
        self.robots[id].phase = if new_remaining.is_zero() {
            Phase::Idle
        } else {
            Phase::Moving {
                decision,
                remaining: new_remaining,
            }
        };
        self.trace.events.push(Event::Displaced {
            tick,
            robot: id,
            from,
            to,
            amount,
        });
        Ok(true)
    }

    /// Emits the invariant checkpoint and re-checks the frozen-assignment
    /// invariants against the current configuration.
    fn emit_checkpoint(&mut self) -> Result<(), RunError> {
        let (config, order) = self.configuration();
        let extremal: Vec<usize> = if self.space.is_circle() {
            extremal_set(&config)
                .extremal
                .into_iter()
                .map(|cfg_idx| order[cfg_idx])
                .collect()
        } else {
            Vec::new()
        };
        // recompute the remaining total exactly and cross-check the running value
        if let Some(frozen) = &self.frozen {
            let recomputed = self
                .robots
                .iter()
                .enumerate()
                .map(|(id, r)| distance_in(&self.space, &r.position, &frozen.targets[id]))
                .fold(Scalar::zero(), |acc, d| acc + d);
            if recomputed != self.remaining_total {
                return Err(RunError::Invariant {
                    tick: self.tick,
                    message: "remaining-distance bookkeeping diverged".into(),
                });
            }
        }
        // refresh the plan cache now; this also runs the freeze checks
        self.ensure_plan()?;
        let tick = self.tick;
        let remaining_total = self.remaining_total.clone();
        self.trace.events.push(Event::Checkpoint {
            tick,
            extremal,
            remaining_total,
        });
        Ok(())
    }
}
