//! Exact one-dimensional geometry on segments and circle circumferences.
//!
//! Every coordinate, distance and cost in this crate is a [`Scalar`]
//! (an arbitrary-precision rational). Symmetry detection and the optimality
//! checks in the harness rely on decidable equality, which floating point
//! cannot provide.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational scalar. `BigRational` keeps values in lowest terms with a
/// positive denominator, which is exactly the representation we need.
pub type Scalar = BigRational;

/// Shorthand for a scalar from an integer numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued scalar.
pub fn int(value: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(value))
}

/// Renders a scalar as `p/q`, or just `p` when it is an integer.
pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed) into a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let text = text.trim();
    let bad = || ScalarParseError(text.to_string());
    match text.split_once('/') {
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad())?;
            let d: BigInt = den.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}` (expected `p` or `p/q` with q != 0)")]
pub struct ScalarParseError(pub String);

/// Travel direction along a circle. Clockwise is the direction of increasing
/// arc coordinate in the simulator's global frame; robots themselves never
/// observe this frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Cw,
    Ccw,
}

impl Dir {
    pub fn opposite(self) -> Dir {
        match self {
            Dir::Cw => Dir::Ccw,
            Dir::Ccw => Dir::Cw,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dir::Cw => write!(f, "cw"),
            Dir::Ccw => write!(f, "ccw"),
        }
    }
}

/// Deployment space: a finite segment `[a, b]` or a circle boundary of the
/// given circumference. Circle positions are arc coordinates in
/// `[0, circumference)` measured clockwise from a fixed internal origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Segment { a: Scalar, b: Scalar },
    Circle { circumference: Scalar },
}

/// Errors for invalid spaces or positions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("degenerate segment: require a < b")]
    DegenerateSegment,
    #[error("circle circumference must be positive")]
    NonPositiveCircumference,
    #[error("position {0} outside the space")]
    PositionOutOfRange(String),
    #[error("operation requires a {expected} space")]
    InvalidSpace { expected: &'static str },
}

impl Space {
    pub fn segment(a: Scalar, b: Scalar) -> Result<Space, SpaceError> {
        if a >= b {
            return Err(SpaceError::DegenerateSegment);
        }
        Ok(Space::Segment { a, b })
    }

    pub fn circle(circumference: Scalar) -> Result<Space, SpaceError> {
        if !circumference.is_positive() {
            return Err(SpaceError::NonPositiveCircumference);
        }
        Ok(Space::Circle { circumference })
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Space::Circle { .. })
    }

    /// Length of the space: `b - a` for a segment, the circumference for a circle.
    pub fn extent(&self) -> Scalar {
        match self {
            Space::Segment { a, b } => b - a,
            Space::Circle { circumference } => circumference.clone(),
        }
    }

    pub fn contains(&self, coord: &Scalar) -> bool {
        match self {
            Space::Segment { a, b } => coord >= a && coord <= b,
            Space::Circle { circumference } => !coord.is_negative() && coord < circumference,
        }
    }

    pub fn check_position(&self, coord: &Scalar) -> Result<(), SpaceError> {
        if self.contains(coord) {
            Ok(())
        } else {
            Err(SpaceError::PositionOutOfRange(format_scalar(coord)))
        }
    }
}

/// Reduces `x` into `[0, circumference)`.
pub fn normalize(x: &Scalar, circumference: &Scalar) -> Scalar {
    let mut r = x % circumference;
    if r.is_negative() {
        r += circumference;
    }
    r
}

/// Arc length travelled from `x` to `y` strictly in direction `dir`; in `[0, C)`.
pub fn directed_arc(x: &Scalar, y: &Scalar, dir: Dir, circumference: &Scalar) -> Scalar {
    match dir {
        Dir::Cw => normalize(&(y - x), circumference),
        Dir::Ccw => normalize(&(x - y), circumference),
    }
}

/// Arc distance (length of the shorter arc) between `x` and `y`; in `[0, C/2]`.
pub fn arc_distance(x: &Scalar, y: &Scalar, circumference: &Scalar) -> Scalar {
    let cw = directed_arc(x, y, Dir::Cw, circumference);
    let ccw = circumference - &cw;
    if cw <= ccw {
        cw
    } else {
        ccw
    }
}

/// Euclidean distance between two segment coordinates.
pub fn segment_distance(x: &Scalar, y: &Scalar) -> Scalar {
    (x - y).abs()
}

/// Path taken by one motion: a directed arc on a circle, or the straight
/// interval on a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Arc(Dir),
    Interval,
}

/// True iff the path from `from` (exclusive) to `to` (inclusive) contains no
/// position from `others`. A robot parked exactly on `to` blocks the path:
/// destinations must never be occupied.
///
/// `others` must not contain `from` itself; the caller excludes the mover.
pub fn path_is_free(
    from: &Scalar,
    to: &Scalar,
    path: Path,
    others: &[Scalar],
    space: &Space,
) -> bool {
    if from == to {
        return true;
    }
    match (space, path) {
        (Space::Circle { circumference }, Path::Arc(dir)) => {
            let span = directed_arc(from, to, dir, circumference);
            others.iter().all(|p| {
                let d = directed_arc(from, p, dir, circumference);
                d.is_zero() || d > span
            })
        }
        (Space::Segment { .. }, Path::Interval) => {
            let (lo, hi) = if from < to { (from, to) } else { (to, from) };
            others
                .iter()
                .all(|p| !(p > lo && p < hi) && p != to)
        }
        _ => panic!("path kind does not match space kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> Scalar {
        int(1)
    }

    #[test]
    fn arc_distance_examples() {
        assert_eq!(arc_distance(&int(0), &rat(3, 4), &c1()), rat(1, 4));
        assert_eq!(arc_distance(&rat(2, 5), &rat(2, 5), &c1()), int(0));
        // antipodal: both arcs have length 1/2
        assert_eq!(arc_distance(&rat(1, 10), &rat(6, 10), &c1()), rat(1, 2));
    }

    #[test]
    fn directed_arc_examples() {
        assert_eq!(directed_arc(&int(0), &rat(3, 4), Dir::Cw, &c1()), rat(3, 4));
        assert_eq!(directed_arc(&int(0), &rat(3, 4), Dir::Ccw, &c1()), rat(1, 4));
        assert_eq!(directed_arc(&rat(1, 3), &rat(1, 3), Dir::Cw, &c1()), int(0));
    }

    #[test]
    fn segment_distance_examples() {
        assert_eq!(segment_distance(&rat(1, 5), &rat(1, 6)), rat(1, 30));
        assert_eq!(segment_distance(&rat(2, 7), &rat(2, 7)), int(0));
        assert_eq!(segment_distance(&int(2), &rat(11, 2)), rat(7, 2));
    }

    #[test]
    fn path_free_segment() {
        let space = Space::segment(int(0), int(1)).unwrap();
        // 0.15 lies inside (0.1, 1/6)
        assert!(!path_is_free(
            &rat(1, 10),
            &rat(1, 6),
            Path::Interval,
            &[rat(3, 20), rat(1, 5)],
            &space,
        ));
        assert!(path_is_free(
            &rat(2, 5),
            &rat(1, 2),
            Path::Interval,
            &[rat(1, 5), rat(9, 10)],
            &space,
        ));
        // destination occupied blocks the path
        assert!(!path_is_free(
            &rat(2, 5),
            &rat(1, 2),
            Path::Interval,
            &[rat(1, 2)],
            &space,
        ));
    }

    #[test]
    fn path_free_circle() {
        let space = Space::circle(int(1)).unwrap();
        assert!(path_is_free(
            &int(0),
            &rat(1, 3),
            Path::Arc(Dir::Cw),
            &[rat(1, 2), rat(3, 4)],
            &space,
        ));
        assert!(!path_is_free(
            &int(0),
            &rat(1, 3),
            Path::Arc(Dir::Ccw),
            &[rat(1, 2), rat(3, 4)],
            &space,
        ));
        // destination occupied
        assert!(!path_is_free(
            &int(0),
            &rat(1, 3),
            Path::Arc(Dir::Cw),
            &[rat(1, 3)],
            &space,
        ));
    }

    #[test]
    fn scalar_round_trip() {
        for text in ["0", "-3", "1/4", "-7/3", "22/7"] {
            let v = parse_scalar(text).unwrap();
            assert_eq!(format_scalar(&v), text);
        }
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        // non-lowest terms normalize
        assert_eq!(parse_scalar("2/4").unwrap(), rat(1, 2));
    }
}
