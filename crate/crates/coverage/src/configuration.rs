//! Robot configurations, views, symmetry detection and the configuration
//! class partition.
//!
//! A configuration is a set of distinct robot positions in a space. On a
//! circle, symmetry is detected exactly: reflection axes are enumerated from
//! the 2n candidate axis feet (each robot and each gap midpoint) and verified
//! by reflecting the whole position set; the rotational order is the largest
//! divisor `w` of `n` such that rotating by `C/w` is a permutation of the set.

use crate::geometry::{
    directed_arc, format_scalar, normalize, rat, Dir, Scalar, Space, SpaceError,
};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// A valid robot configuration: distinct positions, sorted ascending
/// (clockwise from the origin on a circle, left to right on a segment).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    space: Space,
    positions: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("duplicate robot position {0}")]
    DuplicatePosition(String),
    #[error("a configuration needs at least one robot")]
    Empty,
    #[error("robot index {0} out of range")]
    IndexOutOfRange(usize),
}

impl Configuration {
    pub fn new(space: Space, mut positions: Vec<Scalar>) -> Result<Self, ConfigError> {
        if positions.is_empty() {
            return Err(ConfigError::Empty);
        }
        for p in &positions {
            space.check_position(p)?;
        }
        positions.sort();
        for pair in positions.windows(2) {
            if pair[0] == pair[1] {
                return Err(ConfigError::DuplicatePosition(format_scalar(&pair[0])));
            }
        }
        Ok(Configuration { space, positions })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn positions(&self) -> &[Scalar] {
        &self.positions
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, i: usize) -> &Scalar {
        &self.positions[i]
    }

    /// Index of the robot sitting exactly at `coord`, if any.
    pub fn index_of(&self, coord: &Scalar) -> Option<usize> {
        self.positions.binary_search_by(|p| p.cmp(coord)).ok()
    }

    fn circumference(&self) -> &Scalar {
        match &self.space {
            Space::Circle { circumference } => circumference,
            Space::Segment { .. } => panic!("operation requires a circle configuration"),
        }
    }

    /// Clockwise view of robot `i`: arc offsets at which robots are met when
    /// sweeping clockwise from `i`, starting with 0 for the robot itself.
    pub fn clockwise_view(&self, i: usize) -> View {
        self.directional_view(i, Dir::Cw)
    }

    /// Counterclockwise view of robot `i`.
    pub fn counterclockwise_view(&self, i: usize) -> View {
        self.directional_view(i, Dir::Ccw)
    }

    fn directional_view(&self, i: usize, dir: Dir) -> View {
        let c = self.circumference();
        let origin = &self.positions[i];
        let mut offsets: Vec<Scalar> = self
            .positions
            .iter()
            .map(|p| directed_arc(origin, p, dir, c))
            .collect();
        offsets.sort();
        View(offsets)
    }

    /// Lexicographically smaller of the two directional views of robot `i`.
    pub fn min_view(&self, i: usize) -> View {
        let cw = self.clockwise_view(i);
        let ccw = self.counterclockwise_view(i);
        if cw <= ccw {
            cw
        } else {
            ccw
        }
    }

    /// All reflection axes mapping the position set to itself.
    pub fn lines_of_symmetry(&self) -> Vec<Axis> {
        let c = self.circumference();
        let half = c / rat(2, 1);
        let n = self.n();
        // Canonical foot in [0, C/2): an axis is the unordered antipodal pair
        // {f, f + C/2}.
        let mut feet: BTreeSet<Scalar> = BTreeSet::new();
        for i in 0..n {
            feet.insert(normalize(&self.positions[i], &half));
            let gap = directed_arc(
                &self.positions[i],
                &self.positions[(i + 1) % n],
                Dir::Cw,
                c,
            );
            let mid = &self.positions[i] + gap / rat(2, 1);
            feet.insert(normalize(&mid, &half));
        }
        feet.into_iter()
            .filter(|foot| self.is_reflection_symmetric(foot))
            .map(|foot| Axis::from_foot(foot, c))
            .collect()
    }

    /// True iff reflecting every position across the axis with foot `foot`
    /// reproduces the position set.
    fn is_reflection_symmetric(&self, foot: &Scalar) -> bool {
        let c = self.circumference();
        let two_foot = foot * rat(2, 1);
        let mut reflected: Vec<Scalar> = self
            .positions
            .iter()
            .map(|p| normalize(&(&two_foot - p), c))
            .collect();
        reflected.sort();
        reflected == self.positions
    }

    /// Largest `w >= 1` such that rotating by `C/w` maps the set onto itself.
    pub fn rotational_order(&self) -> usize {
        let n = self.n();
        let c = self.circumference();
        for w in divisors_descending(n) {
            if w == 1 {
                return 1;
            }
            let step = c / rat(w as i64, 1);
            if self.is_rotation_symmetric(&step) {
                return w;
            }
        }
        1
    }

    fn is_rotation_symmetric(&self, step: &Scalar) -> bool {
        let c = self.circumference();
        let mut rotated: Vec<Scalar> = self
            .positions
            .iter()
            .map(|p| normalize(&(p + step), c))
            .collect();
        rotated.sort();
        rotated == self.positions
    }

    /// Orbits of the rotation by `C/w` where `w` is the rotational order.
    /// Classes are sorted by their smallest member index; each has exactly
    /// `w` members.
    pub fn rotational_classes(&self) -> Result<Vec<Vec<usize>>, SymmetryError> {
        let w = self.rotational_order();
        if w < 2 {
            return Err(SymmetryError::CalledOnAsymmetric);
        }
        let c = self.circumference();
        let step = c / rat(w as i64, 1);
        let mut seen = vec![false; self.n()];
        let mut classes = Vec::new();
        for i in 0..self.n() {
            if seen[i] {
                continue;
            }
            let mut class = Vec::with_capacity(w);
            let mut coord = self.positions[i].clone();
            for _ in 0..w {
                let idx = self
                    .index_of(&coord)
                    .expect("rotation must permute positions");
                seen[idx] = true;
                class.push(idx);
                coord = normalize(&(&coord + &step), c);
            }
            class.sort();
            classes.push(class);
        }
        Ok(classes)
    }

    /// Strict total order on robots of an asymmetric circle configuration:
    /// ascending lexicographic order of min views. Fails when two min views
    /// coincide, which happens exactly when the configuration is symmetric.
    pub fn total_order(&self) -> Result<Vec<usize>, SymmetryError> {
        let mut keyed: Vec<(View, usize)> =
            (0..self.n()).map(|i| (self.min_view(i), i)).collect();
        keyed.sort();
        for pair in keyed.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(SymmetryError::ConfigSymmetric);
            }
        }
        Ok(keyed.into_iter().map(|(_, i)| i).collect())
    }

    /// Index of the mirror robot of `i` across `axis`, when the configuration
    /// admits that axis.
    pub fn mirror_index(&self, i: usize, axis: &Axis) -> Option<usize> {
        let c = self.circumference();
        let reflected = normalize(&(axis.foot() * rat(2, 1) - &self.positions[i]), c);
        self.index_of(&reflected)
    }

    /// Symmetry summary plus the class of the configuration. The extremal
    /// robot set is computed by the assignment layer and passed in, keeping
    /// the dependency between the two modules one-directional.
    pub fn classify(&self, extremal: &BTreeSet<usize>) -> SymmetryReport {
        let axes = self.lines_of_symmetry();
        let w = self.rotational_order();
        let on_some_axis = axes.iter().any(|axis| {
            extremal
                .iter()
                .any(|&e| axis.passes_through(&self.positions[e], self.circumference()))
        });
        let class = match axes.len() {
            0 => {
                if w >= 2 {
                    ConfigClass::I4
                } else {
                    ConfigClass::I1
                }
            }
            1 => {
                if on_some_axis {
                    ConfigClass::I2
                } else {
                    ConfigClass::I3
                }
            }
            _ => {
                if on_some_axis {
                    ConfigClass::I5
                } else {
                    ConfigClass::I6
                }
            }
        };
        SymmetryReport {
            lines_of_symmetry: axes,
            rotational_order: w,
            class,
        }
    }

    /// Orbits of the full symmetry group of the configuration (the rotation
    /// by `C/w` together with every reflection in `axes`), sorted by their
    /// smallest member. Robots in one orbit are mutually indistinguishable:
    /// they have identical min views and any anonymous rule treats them
    /// alike.
    pub fn symmetry_orbits(&self, axes: &[Axis], w: usize) -> Vec<Vec<usize>> {
        let c = self.circumference();
        let n = self.n();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        if w >= 2 {
            let step = c / rat(w as i64, 1);
            for i in 0..n {
                let img = self
                    .index_of(&normalize(&(&self.positions[i] + &step), c))
                    .expect("rotation permutes the configuration");
                adj[i].push(img);
            }
        }
        for axis in axes {
            for i in 0..n {
                let img = self
                    .index_of(&axis.reflect(&self.positions[i], c))
                    .expect("axis permutes the configuration");
                adj[i].push(img);
            }
        }
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut queue = vec![start];
            let mut members = Vec::new();
            orbit_of[start] = id;
            while let Some(i) = queue.pop() {
                members.push(i);
                for &j in &adj[i] {
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        queue.push(j);
                    }
                }
            }
            members.sort();
            orbits.push(members);
        }
        orbits
    }

    /// Mirror symmetry of a segment configuration about the midpoint
    /// `(a+b)/2`, together with the canonical orientation used for
    /// tie-breaking (see the algorithms module).
    pub fn segment_orientation(&self) -> SegmentOrientation {
        let (a, b) = match &self.space {
            Space::Segment { a, b } => (a, b),
            Space::Circle { .. } => panic!("segment_orientation requires a segment"),
        };
        let from_a: Vec<Scalar> = self.positions.iter().map(|p| p - a).collect();
        let from_b: Vec<Scalar> = self.positions.iter().rev().map(|p| b - p).collect();
        match from_a.cmp(&from_b) {
            std::cmp::Ordering::Less => SegmentOrientation::Forward,
            std::cmp::Ordering::Greater => SegmentOrientation::Backward,
            std::cmp::Ordering::Equal => SegmentOrientation::Symmetric,
        }
    }
}

/// Arc-offset view of a robot; compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct View(pub Vec<Scalar>);

impl View {
    pub fn offsets(&self) -> &[Scalar] {
        &self.0
    }
}

/// A reflection axis, represented by its two antipodal intersection points
/// with the circle. `feet[0]` is the canonical foot in `[0, C/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    feet: [Scalar; 2],
}

impl Axis {
    fn from_foot(foot: Scalar, circumference: &Scalar) -> Axis {
        let other = normalize(&(&foot + circumference / rat(2, 1)), circumference);
        Axis {
            feet: [foot, other],
        }
    }

    pub fn foot(&self) -> &Scalar {
        &self.feet[0]
    }

    pub fn feet(&self) -> &[Scalar; 2] {
        &self.feet
    }

    pub fn passes_through(&self, coord: &Scalar, circumference: &Scalar) -> bool {
        let half = circumference / rat(2, 1);
        normalize(coord, &half) == self.feet[0]
    }

    /// Reflection of `coord` across this axis.
    pub fn reflect(&self, coord: &Scalar, circumference: &Scalar) -> Scalar {
        normalize(&(self.foot() * rat(2, 1) - coord), circumference)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}--{}",
            format_scalar(&self.feet[0]),
            format_scalar(&self.feet[1])
        )
    }
}

/// The six-way partition of circle configurations by symmetry and extremal
/// placement. `I3` and `I6` are the deterministically unsolvable classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigClass {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
}

impl ConfigClass {
    pub fn solvable(self) -> bool {
        !matches!(self, ConfigClass::I3 | ConfigClass::I6)
    }
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConfigClass::I1 => "I1",
            ConfigClass::I2 => "I2",
            ConfigClass::I3 => "I3",
            ConfigClass::I4 => "I4",
            ConfigClass::I5 => "I5",
            ConfigClass::I6 => "I6",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for ConfigClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I1" => Ok(ConfigClass::I1),
            "I2" => Ok(ConfigClass::I2),
            "I3" => Ok(ConfigClass::I3),
            "I4" => Ok(ConfigClass::I4),
            "I5" => Ok(ConfigClass::I5),
            "I6" => Ok(ConfigClass::I6),
            other => Err(format!("unknown configuration class `{other}`")),
        }
    }
}

/// Symmetry structure of a circle configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub lines_of_symmetry: Vec<Axis>,
    pub rotational_order: usize,
    pub class: ConfigClass,
}

/// Mirror structure of a segment configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentOrientation {
    /// Canonical orientation reads the segment from endpoint `a`.
    Forward,
    /// Canonical orientation reads the segment from endpoint `b`.
    Backward,
    /// The configuration is mirror-symmetric about the midpoint.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("operation requires rotational order >= 2")]
    CalledOnAsymmetric,
    #[error("configuration is symmetric: min views are not all distinct")]
    ConfigSymmetric,
}

fn divisors_descending(n: usize) -> Vec<usize> {
    let mut divs: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    divs.reverse();
    divs
}

/// Convenience: is `coord` one of the two feet of any axis in `axes`?
pub fn on_any_axis(coord: &Scalar, axes: &[Axis], circumference: &Scalar) -> bool {
    axes.iter().any(|a| a.passes_through(coord, circumference))
}

/// True when every consecutive clockwise gap equals `C/n`: the configuration
/// is an exact regular n-gon (trivially true for n = 1).
pub fn is_regular_ngon(config: &Configuration) -> bool {
    let c = match config.space() {
        Space::Circle { circumference } => circumference,
        Space::Segment { .. } => return false,
    };
    let n = config.n();
    let step = c / rat(n as i64, 1);
    (0..n).all(|i| {
        let gap = directed_arc(
            config.position(i),
            config.position((i + 1) % n),
            Dir::Cw,
            c,
        );
        if n == 1 {
            gap.is_zero()
        } else {
            gap == step
        }
    })
}
