//! Min-sum target computation.
//!
//! On a segment the optimal targets are the n evenly spaced interior points
//! and the optimal matching is the order-preserving one. On a circle every
//! min-cost assignment is realized by one of the n regular n-gons anchored at
//! a robot, so the optimum is found by scoring each anchor; the anchors that
//! attain it form the extremal set.
//!
//! The brute-force enumerations at the bottom are deliberately independent
//! oracles: they minimize over all n! bijections (and, on the circle, over a
//! grid of n-gon rotations) and are used by the test suites to cross-check
//! the closed-form computations above.

use crate::configuration::Configuration;
use crate::geometry::{
    arc_distance, normalize, rat, segment_distance, Scalar, Space, SpaceError,
};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Destination points plus the robot-to-point bijection.
///
/// `points` are ordered: ascending for a segment; clockwise starting at the
/// anchor robot for a circle. `matching[i]` is the index into `points`
/// assigned to robot `i` (robots indexed as in the sorted configuration).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    pub points: Vec<Scalar>,
    pub matching: Vec<usize>,
    pub anchor: Option<usize>,
}

impl TargetSet {
    /// Target coordinate assigned to robot `i`.
    pub fn target_of(&self, i: usize) -> &Scalar {
        &self.points[self.matching[i]]
    }

    /// The destination points as a sorted set (for exact set comparison).
    pub fn sorted_points(&self) -> Vec<Scalar> {
        let mut pts = self.points.clone();
        pts.sort();
        pts
    }
}

/// Per-anchor costs on a circle, the optimum `D*`, and the extremal set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    /// `per_candidate[i]` is the total arc distance when robot `i` is fixed.
    pub per_candidate: Vec<Scalar>,
    pub optimum: Scalar,
    pub extremal: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignmentError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("brute force limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// Evenly spaced segment targets `x_i = a + (2i - 1)(b - a) / (2n)` with the
/// order-preserving matching (the k-th leftmost robot takes the k-th point).
pub fn line_targets(a: &Scalar, b: &Scalar, n: usize) -> Result<TargetSet, AssignmentError> {
    if a >= b {
        return Err(SpaceError::DegenerateSegment.into());
    }
    let span = b - a;
    let den = rat(2 * n as i64, 1);
    let points: Vec<Scalar> = (1..=n as i64)
        .map(|i| a + &span * rat(2 * i - 1, 1) / &den)
        .collect();
    Ok(TargetSet {
        matching: (0..n).collect(),
        points,
        anchor: None,
    })
}

/// The regular n-gon anchored at robot `anchor`: the robot `k` steps
/// clockwise from the anchor is assigned the vertex `k * C/n` clockwise from
/// the anchor's position. The anchor keeps its own position.
pub fn ngon_targets(config: &Configuration, anchor: usize) -> TargetSet {
    let c = match config.space() {
        Space::Circle { circumference } => circumference,
        Space::Segment { .. } => panic!("ngon_targets requires a circle configuration"),
    };
    let n = config.n();
    let step = c / rat(n as i64, 1);
    let base = config.position(anchor);
    let points: Vec<Scalar> = (0..n as i64)
        .map(|k| normalize(&(base + &step * rat(k, 1)), c))
        .collect();
    let mut matching = vec![0usize; n];
    for k in 0..n {
        matching[(anchor + k) % n] = k;
    }
    debug_assert_eq!(&points[0], base);
    TargetSet {
        points,
        matching,
        anchor: Some(anchor),
    }
}

/// Total arc distance of the assignment anchored at `anchor`.
pub fn candidate_cost(config: &Configuration, anchor: usize) -> Scalar {
    let c = match config.space() {
        Space::Circle { circumference } => circumference,
        Space::Segment { .. } => panic!("candidate_cost requires a circle configuration"),
    };
    let targets = ngon_targets(config, anchor);
    (0..config.n())
        .map(|i| arc_distance(config.position(i), targets.target_of(i), c))
        .fold(Scalar::zero(), |acc, d| acc + d)
}

/// Scores every anchor and collects the argmin set.
pub fn extremal_set(config: &Configuration) -> CostReport {
    let per_candidate: Vec<Scalar> = (0..config.n())
        .map(|i| candidate_cost(config, i))
        .collect();
    let optimum = per_candidate.iter().min().cloned().expect("n >= 1");
    let extremal = per_candidate
        .iter()
        .enumerate()
        .filter(|(_, cost)| **cost == optimum)
        .map(|(i, _)| i)
        .collect();
    CostReport {
        per_candidate,
        optimum,
        extremal,
    }
}

/// Total cost of a segment configuration under the order-preserving matching.
pub fn segment_optimal_cost(config: &Configuration) -> Result<Scalar, AssignmentError> {
    let (a, b) = match config.space() {
        Space::Segment { a, b } => (a, b),
        Space::Circle { .. } => panic!("segment_optimal_cost requires a segment"),
    };
    let targets = line_targets(a, b, config.n())?;
    Ok((0..config.n())
        .map(|i| segment_distance(config.position(i), targets.target_of(i)))
        .fold(Scalar::zero(), |acc, d| acc + d))
}

/// Result of a brute-force minimization: the exact minimum cost and one
/// witness assignment attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub cost: Scalar,
    /// Destination points of the witness (gon vertices or segment targets).
    pub points: Vec<Scalar>,
    /// `matching[i]` indexes `points`; robot `i` moves there.
    pub matching: Vec<usize>,
}

const BRUTE_FORCE_LIMIT: usize = 7;

/// Minimum total arc distance over all n! bijections onto regular n-gons
/// rotated by a grid of offsets. The offset set is the uniform subdivision of
/// `[0, C/n)` into `grid` cells plus every robot coordinate mod `C/n`, so the
/// grid always contains the rotations of the n anchored candidates and the
/// result is exact whenever those are optimal.
pub fn brute_force_circle_optimum(
    config: &Configuration,
    grid: usize,
) -> Result<BruteForce, AssignmentError> {
    let n = config.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(AssignmentError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let c = match config.space() {
        Space::Circle { circumference } => circumference,
        Space::Segment { .. } => panic!("brute_force_circle_optimum requires a circle"),
    };
    let sector = c / rat(n as i64, 1);
    let mut offsets: BTreeSet<Scalar> = BTreeSet::new();
    for j in 0..grid as i64 {
        offsets.insert(&sector * rat(j, 1) / rat(grid.max(1) as i64, 1));
    }
    for p in config.positions() {
        offsets.insert(normalize(p, &sector));
    }

    let mut best: Option<BruteForce> = None;
    for theta in offsets {
        let vertices: Vec<Scalar> = (0..n as i64)
            .map(|k| normalize(&(&theta + &sector * rat(k, 1)), c))
            .collect();
        let dist: Vec<Vec<Scalar>> = config
            .positions()
            .iter()
            .map(|p| vertices.iter().map(|v| arc_distance(p, v, c)).collect())
            .collect();
        let bound = best.as_ref().map(|b| b.cost.clone());
        if let Some((cost, matching)) = min_assignment(&dist, bound) {
            best = Some(BruteForce {
                cost,
                points: vertices,
                matching,
            });
        }
    }
    Ok(best.expect("offset set is nonempty"))
}

/// Minimum over all n! bijections from robots to the evenly spaced segment
/// targets.
pub fn brute_force_line_optimum(config: &Configuration) -> Result<BruteForce, AssignmentError> {
    let n = config.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(AssignmentError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let (a, b) = match config.space() {
        Space::Segment { a, b } => (a, b),
        Space::Circle { .. } => panic!("brute_force_line_optimum requires a segment"),
    };
    let targets = line_targets(a, b, n)?;
    let dist: Vec<Vec<Scalar>> = config
        .positions()
        .iter()
        .map(|p| {
            targets
                .points
                .iter()
                .map(|t| segment_distance(p, t))
                .collect()
        })
        .collect();
    let (cost, matching) = min_assignment(&dist, None).expect("unbounded search always succeeds");
    Ok(BruteForce {
        cost,
        points: targets.points,
        matching,
    })
}

/// Exhaustive assignment minimization with branch-and-bound pruning.
/// Returns `None` if no bijection beats `bound`.
fn min_assignment(dist: &[Vec<Scalar>], bound: Option<Scalar>) -> Option<(Scalar, Vec<usize>)> {
    let n = dist.len();
    let mut best_cost = bound;
    let mut best_matching: Option<Vec<usize>> = None;
    let mut current = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn recurse(
        dist: &[Vec<Scalar>],
        robot: usize,
        running: Scalar,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best_cost: &mut Option<Scalar>,
        best_matching: &mut Option<Vec<usize>>,
    ) {
        let n = dist.len();
        if let Some(best) = best_cost {
            if running >= *best {
                return;
            }
        }
        if robot == n {
            *best_cost = Some(running);
            *best_matching = Some(current.clone());
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            used[v] = true;
            current[robot] = v;
            recurse(
                dist,
                robot + 1,
                running.clone() + &dist[robot][v],
                current,
                used,
                best_cost,
                best_matching,
            );
            used[v] = false;
        }
    }

    recurse(
        dist,
        0,
        Scalar::zero(),
        &mut current,
        &mut used,
        &mut best_cost,
        &mut best_matching,
    );
    best_matching.map(|m| (best_cost.expect("cost set with matching"), m))
}
