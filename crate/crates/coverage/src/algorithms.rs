//! Compute-phase decision rules.
//!
//! Robots are oblivious: every activation re-derives everything from the
//! current snapshot, so each rule here is a pure function from a
//! configuration to a full vector of per-robot decisions. The rules only use
//! relative geometry (gaps, views, mirror images), never the simulator's
//! global frame; the property tests check rotation equivariance explicitly.
//!
//! The dispatcher routes by configuration class:
//! asymmetric snapshots go to the single-mover rules (unique anchor, or the
//! min-view anchor when several anchors tie), a single axis with an anchor on
//! it moves one mirror pair at a time, pure rotational symmetry moves one
//! rotational class at a time, and the unsolvable classes never move.
//! Because classification happens on every snapshot, the "symmetry broken
//! during execution" fallbacks come for free.

use crate::assignment::{extremal_set, line_targets, ngon_targets, CostReport, TargetSet};
use crate::configuration::{
    ConfigClass, Configuration, SegmentOrientation, SymmetryReport, View,
};
use crate::geometry::{directed_arc, path_is_free, Dir, Path, Scalar, Space};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// One robot's decision for the current cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveDecision {
    Stay,
    Move { destination: Scalar, path: Path },
}

impl MoveDecision {
    pub fn is_move(&self) -> bool {
        matches!(self, MoveDecision::Move { .. })
    }
}

/// Selectable decision rules. `Dispatch` is the class-based router and the
/// one used by ordinary runs; the others expose the individual rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Dispatch,
    Segment,
    AsymUnique,
    AsymMulti,
    SymPair,
    RotClass,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::Dispatch,
        AlgorithmId::Segment,
        AlgorithmId::AsymUnique,
        AlgorithmId::AsymMulti,
        AlgorithmId::SymPair,
        AlgorithmId::RotClass,
    ];

    /// The circle rules shipped for dispatching (everything except the
    /// segment rule).
    pub const CIRCLE: [AlgorithmId; 5] = [
        AlgorithmId::Dispatch,
        AlgorithmId::AsymUnique,
        AlgorithmId::AsymMulti,
        AlgorithmId::SymPair,
        AlgorithmId::RotClass,
    ];
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AlgorithmId::Dispatch => "dispatch",
            AlgorithmId::Segment => "segment",
            AlgorithmId::AsymUnique => "asym-unique",
            AlgorithmId::AsymMulti => "asym-multi",
            AlgorithmId::SymPair => "sym-pair",
            AlgorithmId::RotClass => "rot-class",
        };
        write!(f, "{name}")
    }
}

impl FromStr for AlgorithmId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dispatch" => Ok(AlgorithmId::Dispatch),
            "segment" => Ok(AlgorithmId::Segment),
            "asym-unique" => Ok(AlgorithmId::AsymUnique),
            "asym-multi" => Ok(AlgorithmId::AsymMulti),
            "sym-pair" => Ok(AlgorithmId::SymPair),
            "rot-class" => Ok(AlgorithmId::RotClass),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("algorithm `{algorithm}` does not apply to this space")]
    WrongSpace { algorithm: AlgorithmId },
    #[error("unique-anchor rule invoked with {found} extremal robots")]
    PreconditionViolated { found: usize },
}

/// How the plan fixed its destination set; recorded in invariant checkpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnchorSelection {
    /// Segment targets are fixed by the endpoints alone.
    Segment,
    /// Regular n-gon anchored at this robot (index in sorted order).
    Anchored(usize),
    /// The configuration is already a regular n-gon.
    Formed,
    /// Deterministically unsolvable class: nobody ever moves.
    Unsolvable(ConfigClass),
    /// Defensive halt: the rule could not select a mover anonymously
    /// (only reachable when a rule is forced outside its precondition).
    Stuck,
}

/// Decisions for every robot of one snapshot, plus the destination
/// assignment they drive toward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePlan {
    pub decisions: Vec<MoveDecision>,
    pub targets: Option<TargetSet>,
    pub anchor: AnchorSelection,
}

impl MovePlan {
    fn all_stay(n: usize, anchor: AnchorSelection, targets: Option<TargetSet>) -> MovePlan {
        MovePlan {
            decisions: vec![MoveDecision::Stay; n],
            targets,
            anchor,
        }
    }

    pub fn movers(&self) -> Vec<usize> {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_move())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Symmetry structure and anchor costs of one circle snapshot.
#[derive(Debug, Clone)]
pub struct CircleAnalysis {
    pub cost: CostReport,
    pub symmetry: SymmetryReport,
}

/// Classifies a circle configuration, feeding the extremal set into the
/// class partition.
pub fn analyze(config: &Configuration) -> CircleAnalysis {
    let cost = extremal_set(config);
    let symmetry = config.classify(&cost.extremal);
    CircleAnalysis { cost, symmetry }
}

/// Per-robot decision, as a robot would compute it from its own snapshot.
pub fn decide(
    config: &Configuration,
    robot: usize,
    algorithm: AlgorithmId,
) -> Result<MoveDecision, DecideError> {
    Ok(move_plan(config, algorithm)?.decisions[robot].clone())
}

/// Computes the full decision vector for one snapshot under `algorithm`.
pub fn move_plan(config: &Configuration, algorithm: AlgorithmId) -> Result<MovePlan, DecideError> {
    match (algorithm, config.space().is_circle()) {
        (AlgorithmId::Segment, true) | (AlgorithmId::Dispatch, false) => segment_plan(config),
        (AlgorithmId::Segment, false) => segment_plan(config),
        (_, false) => Err(DecideError::WrongSpace { algorithm }),
        (AlgorithmId::Dispatch, true) => Ok(dispatch_plan(config, &analyze(config))),
        (AlgorithmId::AsymUnique, true) => {
            let analysis = analyze(config);
            if analysis.cost.extremal.len() != 1 {
                return Err(DecideError::PreconditionViolated {
                    found: analysis.cost.extremal.len(),
                });
            }
            let anchor = *analysis.cost.extremal.iter().next().expect("nonempty");
            Ok(anchored_plan(config, anchor))
        }
        (AlgorithmId::AsymMulti, true) => {
            let analysis = analyze(config);
            Ok(min_view_anchored_plan(config, &analysis.cost.extremal))
        }
        (AlgorithmId::SymPair, true) => {
            let analysis = analyze(config);
            if analysis.symmetry.class == ConfigClass::I2 {
                Ok(symmetric_plan(config, &analysis))
            } else {
                Ok(dispatch_plan(config, &analysis))
            }
        }
        (AlgorithmId::RotClass, true) => {
            let analysis = analyze(config);
            if analysis.symmetry.class == ConfigClass::I4 {
                Ok(rot_class_plan(config, &analysis))
            } else {
                Ok(dispatch_plan(config, &analysis))
            }
        }
    }
}

/// Class-based routing. Unsolvable classes yield all-stay plans; the harness
/// refuses such runs up front, this is only the per-robot defensive answer.
pub fn dispatch_plan(config: &Configuration, analysis: &CircleAnalysis) -> MovePlan {
    let n = config.n();
    match analysis.symmetry.class {
        ConfigClass::I1 => {
            if analysis.cost.extremal.len() == 1 {
                let anchor = *analysis.cost.extremal.iter().next().expect("nonempty");
                anchored_plan(config, anchor)
            } else {
                min_view_anchored_plan(config, &analysis.cost.extremal)
            }
        }
        ConfigClass::I2 => symmetric_plan(config, analysis),
        ConfigClass::I4 => rot_class_plan(config, analysis),
        ConfigClass::I5 => {
            if crate::configuration::is_regular_ngon(config) {
                MovePlan::all_stay(
                    n,
                    AnchorSelection::Formed,
                    Some(ngon_targets(config, 0)),
                )
            } else {
                // Anchors on an axis but not a regular n-gon yet. Initial
                // configurations of this shape are exotic, but runs that
                // form the n-gon through a symmetric intermediate snapshot
                // land here routinely; the orbit rule keeps them moving.
                symmetric_plan(config, analysis)
            }
        }
        class @ (ConfigClass::I3 | ConfigClass::I6) => {
            MovePlan::all_stay(n, AnchorSelection::Unsolvable(class), None)
        }
    }
}

/// Candidate facts for one robot relative to a target set.
#[derive(Debug, Clone)]
struct Candidate {
    destination: Scalar,
    path: Path,
    distance: Scalar,
    at_target: bool,
    free: bool,
}

/// A robot moves along the shorter arc to its vertex. At exactly half the
/// circumference both arcs tie: prefer the free one; when both are free take
/// the one whose first blocker sits farther away; when even that ties, fall
/// back to clockwise.
fn circle_candidate(config: &Configuration, i: usize, destination: &Scalar) -> Candidate {
    let c = match config.space() {
        Space::Circle { circumference } => circumference,
        Space::Segment { .. } => unreachable!("circle_candidate on segment"),
    };
    let from = config.position(i);
    if from == destination {
        return Candidate {
            destination: destination.clone(),
            path: Path::Arc(Dir::Cw),
            distance: Scalar::from_integer(0.into()),
            at_target: true,
            free: true,
        };
    }
    let others: Vec<Scalar> = config
        .positions()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, p)| p.clone())
        .collect();
    let d_cw = directed_arc(from, destination, Dir::Cw, c);
    let d_ccw = c - &d_cw;
    let dir = match d_cw.cmp(&d_ccw) {
        std::cmp::Ordering::Less => Dir::Cw,
        std::cmp::Ordering::Greater => Dir::Ccw,
        std::cmp::Ordering::Equal => {
            let free_cw = path_is_free(from, destination, Path::Arc(Dir::Cw), &others, config.space());
            let free_ccw =
                path_is_free(from, destination, Path::Arc(Dir::Ccw), &others, config.space());
            match (free_cw, free_ccw) {
                (true, false) => Dir::Cw,
                (false, true) => Dir::Ccw,
                _ => {
                    // clearance: distance to the first robot met in each direction
                    let first = |dir: Dir| {
                        others
                            .iter()
                            .map(|p| directed_arc(from, p, dir, c))
                            .min()
                            .expect("n >= 2 when a move is pending")
                    };
                    if first(Dir::Ccw) > first(Dir::Cw) {
                        Dir::Ccw
                    } else {
                        Dir::Cw
                    }
                }
            }
        }
    };
    let distance = if dir == Dir::Cw { d_cw } else { d_ccw };
    let free = path_is_free(from, destination, Path::Arc(dir), &others, config.space());
    Candidate {
        destination: destination.clone(),
        path: Path::Arc(dir),
        distance,
        at_target: false,
        free,
    }
}

fn circle_candidates(config: &Configuration, targets: &TargetSet) -> Vec<Candidate> {
    (0..config.n())
        .map(|i| circle_candidate(config, i, targets.target_of(i)))
        .collect()
}

/// Lazily computed min views, shared by the tie-breaks.
struct ViewTable<'a> {
    config: &'a Configuration,
    views: Vec<Option<View>>,
}

impl<'a> ViewTable<'a> {
    fn new(config: &'a Configuration) -> Self {
        ViewTable {
            config,
            views: vec![None; config.n()],
        }
    }

    fn min_view(&mut self, i: usize) -> &View {
        if self.views[i].is_none() {
            self.views[i] = Some(self.config.min_view(i));
        }
        self.views[i].as_ref().expect("just filled")
    }

    /// Index with the lexicographically smallest min view, or `None` when the
    /// minimum is attained more than once (an anonymity tie).
    fn unique_min(&mut self, indices: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut best: Option<(View, usize, bool)> = None;
        for i in indices {
            let view = self.min_view(i).clone();
            best = Some(match best {
                None => (view, i, true),
                Some((bv, bi, unique)) => match view.cmp(&bv) {
                    std::cmp::Ordering::Less => (view, i, true),
                    std::cmp::Ordering::Equal => (bv, bi, false),
                    std::cmp::Ordering::Greater => (bv, bi, unique),
                },
            });
        }
        match best {
            Some((_, i, true)) => Some(i),
            _ => None,
        }
    }
}

/// Single-mover rule around a fixed anchor: among robots with a free shorter
/// arc, the one at minimal distance moves; distance ties go to the smaller
/// min view. Anonymity ties (possible only on symmetric snapshots, outside
/// this rule's domain) make everyone hold still.
fn anchored_plan(config: &Configuration, anchor: usize) -> MovePlan {
    let n = config.n();
    let targets = ngon_targets(config, anchor);
    let cands = circle_candidates(config, &targets);
    let eligible: Vec<usize> = (0..n)
        .filter(|&i| !cands[i].at_target && cands[i].free)
        .collect();
    let Some(dmin) = eligible.iter().map(|&i| cands[i].distance.clone()).min() else {
        return MovePlan::all_stay(n, AnchorSelection::Anchored(anchor), Some(targets));
    };
    let pool: Vec<usize> = eligible
        .into_iter()
        .filter(|&i| cands[i].distance == dmin)
        .collect();
    let winner = if pool.len() == 1 {
        Some(pool[0])
    } else {
        ViewTable::new(config).unique_min(pool)
    };
    match winner {
        None => MovePlan::all_stay(n, AnchorSelection::Stuck, Some(targets)),
        Some(w) => {
            let mut decisions = vec![MoveDecision::Stay; n];
            decisions[w] = MoveDecision::Move {
                destination: cands[w].destination.clone(),
                path: cands[w].path,
            };
            MovePlan {
                decisions,
                targets: Some(targets),
                anchor: AnchorSelection::Anchored(anchor),
            }
        }
    }
}

/// Multi-anchor variant: fix the extremal robot with the smallest min view,
/// then proceed as in the single-anchor rule.
fn min_view_anchored_plan(config: &Configuration, extremal: &BTreeSet<usize>) -> MovePlan {
    let anchor = ViewTable::new(config).unique_min(extremal.iter().copied());
    match anchor {
        Some(a) => anchored_plan(config, a),
        None => MovePlan::all_stay(config.n(), AnchorSelection::Stuck, None),
    }
}

/// Symmetry-orbit rule for configurations with a reflection axis and an
/// anchor robot on it. With a single axis the orbits are mirror pairs; a
/// mid-run snapshot can also combine an axis with rotational symmetry, in
/// which case whole dihedral orbits are indistinguishable and move together.
/// Eligible orbits (every member off-target with a free path) compete by
/// distance, then by the smallest member view; the whole winning orbit moves.
fn symmetric_plan(config: &Configuration, analysis: &CircleAnalysis) -> MovePlan {
    let n = config.n();
    let axes = &analysis.symmetry.lines_of_symmetry;
    debug_assert!(!axes.is_empty());
    let c = match config.space() {
        Space::Circle { circumference } => circumference.clone(),
        Space::Segment { .. } => unreachable!(),
    };
    // Anchors: extremal robots sitting on an axis. They must all agree on
    // the destination assignment, otherwise no anonymous choice exists.
    let anchors: Vec<usize> = (0..n)
        .filter(|i| analysis.cost.extremal.contains(i))
        .filter(|&i| {
            axes.iter()
                .any(|axis| axis.passes_through(config.position(i), &c))
        })
        .collect();
    let Some((&first, rest)) = anchors.split_first() else {
        // No extremal robot on any axis: not this rule's domain.
        return MovePlan::all_stay(n, AnchorSelection::Stuck, None);
    };
    let targets = ngon_targets(config, first);
    for &a in rest {
        let other = ngon_targets(config, a);
        let agree = other.sorted_points() == targets.sorted_points()
            && (0..n).all(|i| other.target_of(i) == targets.target_of(i));
        if !agree {
            return MovePlan::all_stay(n, AnchorSelection::Stuck, None);
        }
    }
    let cands = circle_candidates(config, &targets);

    let orbits = config.symmetry_orbits(axes, analysis.symmetry.rotational_order);
    let eligible: Vec<&Vec<usize>> = orbits
        .iter()
        .filter(|orbit| orbit.iter().all(|&i| !cands[i].at_target && cands[i].free))
        .collect();
    for orbit in &eligible {
        debug_assert!(orbit
            .windows(2)
            .all(|w| cands[w[0]].distance == cands[w[1]].distance));
    }
    let Some(dmin) = eligible
        .iter()
        .map(|orbit| cands[orbit[0]].distance.clone())
        .min()
    else {
        return MovePlan::all_stay(n, AnchorSelection::Anchored(first), Some(targets));
    };
    let pool: Vec<&Vec<usize>> = eligible
        .into_iter()
        .filter(|orbit| cands[orbit[0]].distance == dmin)
        .collect();
    let winner = if pool.len() == 1 {
        Some(pool[0])
    } else {
        let mut table = ViewTable::new(config);
        let mut best: Option<(View, &Vec<usize>, bool)> = None;
        for orbit in pool {
            let key = orbit
                .iter()
                .map(|&i| table.min_view(i).clone())
                .min()
                .expect("orbits are nonempty");
            best = Some(match best {
                None => (key, orbit, true),
                Some((bk, bo, unique)) => match key.cmp(&bk) {
                    std::cmp::Ordering::Less => (key, orbit, true),
                    std::cmp::Ordering::Equal => (bk, bo, false),
                    std::cmp::Ordering::Greater => (bk, bo, unique),
                },
            });
        }
        match best {
            Some((_, orbit, true)) => Some(orbit),
            _ => None,
        }
    };
    match winner {
        None => MovePlan::all_stay(n, AnchorSelection::Stuck, Some(targets)),
        Some(orbit) => {
            let mut decisions = vec![MoveDecision::Stay; n];
            for &k in orbit {
                decisions[k] = MoveDecision::Move {
                    destination: cands[k].destination.clone(),
                    path: cands[k].path,
                };
            }
            MovePlan {
                decisions,
                targets: Some(targets),
                anchor: AnchorSelection::Anchored(first),
            }
        }
    }
}

/// Rotational rule: the extremal robots fix the n-gon and whoever sits on a
/// vertex holds still; among the rotational classes whose members all have
/// free paths, the class at minimal distance (ties by the smallest member
/// view) moves as a whole.
///
/// The anchor is the extremal robot with the lexicographically smallest min
/// view. Extremal robots with equal views are rotations of one another and
/// anchor the same n-gon with the same matching, so the chosen destination
/// assignment does not depend on which of them is picked; the choice stays
/// anonymous. (The extremal set can span several full classes when one class
/// happens to sit exactly on the other's vertices; all of them agree on the
/// n-gon in that case too.)
fn rot_class_plan(config: &Configuration, analysis: &CircleAnalysis) -> MovePlan {
    let n = config.n();
    let classes = config
        .rotational_classes()
        .expect("rotational order >= 2 in this rule's domain");
    let extremal = &analysis.cost.extremal;
    let mut table = ViewTable::new(config);
    let anchor = extremal
        .iter()
        .copied()
        .min_by(|&a, &b| {
            let va = table.min_view(a).clone();
            va.cmp(table.min_view(b))
        })
        .expect("extremal set is nonempty");
    let targets = ngon_targets(config, anchor);
    let cands = circle_candidates(config, &targets);

    let eligible: Vec<&Vec<usize>> = classes
        .iter()
        .filter(|class| class.iter().all(|&i| !cands[i].at_target && cands[i].free))
        .collect();
    for class in &eligible {
        debug_assert!(class
            .windows(2)
            .all(|w| cands[w[0]].distance == cands[w[1]].distance));
    }
    let Some(dmin) = eligible
        .iter()
        .map(|class| cands[class[0]].distance.clone())
        .min()
    else {
        return MovePlan::all_stay(n, AnchorSelection::Anchored(anchor), Some(targets));
    };
    let pool: Vec<&Vec<usize>> = eligible
        .into_iter()
        .filter(|class| cands[class[0]].distance == dmin)
        .collect();
    let winner = if pool.len() == 1 {
        Some(pool[0])
    } else {
        let mut table = ViewTable::new(config);
        let mut best: Option<(View, &Vec<usize>, bool)> = None;
        for class in pool {
            let key = class
                .iter()
                .map(|&i| table.min_view(i).clone())
                .min()
                .expect("classes are nonempty");
            best = Some(match best {
                None => (key, class, true),
                Some((bk, bc, unique)) => match key.cmp(&bk) {
                    std::cmp::Ordering::Less => (key, class, true),
                    std::cmp::Ordering::Equal => (bk, bc, false),
                    std::cmp::Ordering::Greater => (bk, bc, unique),
                },
            });
        }
        match best {
            Some((_, class, true)) => Some(class),
            _ => None,
        }
    };
    match winner {
        None => MovePlan::all_stay(n, AnchorSelection::Stuck, Some(targets)),
        Some(class) => {
            let mut decisions = vec![MoveDecision::Stay; n];
            for &k in class {
                decisions[k] = MoveDecision::Move {
                    destination: cands[k].destination.clone(),
                    path: cands[k].path,
                };
            }
            MovePlan {
                decisions,
                targets: Some(targets),
                anchor: AnchorSelection::Anchored(anchor),
            }
        }
    }
}

/// Segment rule: the free-path robot closest to the canonical first endpoint
/// moves; on a midpoint-symmetric snapshot the orientation cannot be agreed
/// on, and the two mirror candidates both move (their order-preserving paths
/// cannot cross).
fn segment_plan(config: &Configuration) -> Result<MovePlan, DecideError> {
    let (a, b) = match config.space() {
        Space::Segment { a, b } => (a.clone(), b.clone()),
        Space::Circle { .. } => {
            return Err(DecideError::WrongSpace {
                algorithm: AlgorithmId::Segment,
            })
        }
    };
    let n = config.n();
    let targets = line_targets(&a, &b, n).expect("segment spaces are validated");
    let mut decisions = vec![MoveDecision::Stay; n];
    let mut candidates: Vec<usize> = Vec::new();
    for i in 0..n {
        let from = config.position(i);
        let to = targets.target_of(i);
        if from == to {
            continue;
        }
        let others: Vec<Scalar> = config
            .positions()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, p)| p.clone())
            .collect();
        if path_is_free(from, to, Path::Interval, &others, config.space()) {
            candidates.push(i);
        }
    }
    if candidates.is_empty() {
        return Ok(MovePlan {
            decisions,
            targets: Some(targets),
            anchor: AnchorSelection::Segment,
        });
    }
    let winners: Vec<usize> = match config.segment_orientation() {
        SegmentOrientation::Forward => vec![candidates[0]],
        SegmentOrientation::Backward => vec![*candidates.last().expect("nonempty")],
        SegmentOrientation::Symmetric => {
            let first = candidates[0];
            let last = *candidates.last().expect("nonempty");
            if first == last {
                vec![first]
            } else {
                vec![first, last]
            }
        }
    };
    for w in winners {
        decisions[w] = MoveDecision::Move {
            destination: targets.target_of(w).clone(),
            path: Path::Interval,
        };
    }
    Ok(MovePlan {
        decisions,
        targets: Some(targets),
        anchor: AnchorSelection::Segment,
    })
}

/// Refusal check used by the harness before starting a circle run.
pub fn check_solvable(config: &Configuration) -> Result<CircleAnalysis, ConfigClass> {
    let analysis = analyze(config);
    if analysis.symmetry.class.solvable() {
        Ok(analysis)
    } else {
        Err(analysis.symmetry.class)
    }
}
