//! File formats, trace verification and the demonstration drivers behind the
//! command-line interface.

pub mod demo;
pub mod scenario;
pub mod trace;
pub mod verify;

pub use demo::{demo_impossibility, AlgoDemo, DemoOutcome, DemoReport};
pub use scenario::{Scenario, ScenarioError};
pub use verify::{verify_trace, CheckResult, VerificationReport};
