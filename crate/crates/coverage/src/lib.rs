//! Deterministic simulator and verification harness for min-sum uniform
//! coverage by oblivious, silent, asynchronous robots on a finite segment
//! and on a circle.
//!
//! All positions, distances and costs are exact rationals, so symmetry
//! detection, optimality claims and convergence checks are decided, not
//! approximated. The crate is organized as:
//!
//! - [`geometry`] — rational scalars, spaces, arc and segment distances,
//!   path-freeness;
//! - [`configuration`] — configurations, views, reflection and rotational
//!   symmetry, the six-class partition;
//! - [`assignment`] — optimal targets, per-anchor costs, the extremal set,
//!   and independent brute-force oracles;
//! - [`algorithms`] — the per-snapshot decision rules and the class
//!   dispatcher;
//! - [`scheduler`] — the adversarial execution engine with trace emission
//!   and built-in invariant checks;
//! - [`harness`] — scenario and trace file formats, the trace verifier, the
//!   oracle comparison and the impossibility demonstration.

pub mod algorithms;
pub mod assignment;
pub mod configuration;
pub mod geometry;
pub mod harness;
pub mod scheduler;

pub use algorithms::{AlgorithmId, MoveDecision, MovePlan};
pub use configuration::{ConfigClass, Configuration};
pub use geometry::{Scalar, Space};
pub use scheduler::{AdversaryKind, Policy, RunOutcome, SchedKind};
