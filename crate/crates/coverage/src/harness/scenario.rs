//! Scenario files: a TOML document describing the space, the initial robot
//! positions, the decision rule and the scheduling policy. All rationals are
//! strings of the form `p` or `p/q`, so files are exact and diffable.
//!
//! ```toml
//! algorithm = "dispatch"
//! positions = ["0", "1/4", "3/4"]
//! max-ticks = 100000
//!
//! [space]
//! kind = "circle"          # or "segment" with a = "0", b = "1"
//! circumference = "1"
//!
//! [policy]                 # optional; defaults described in the README
//! kind = "async"           # async | ssync | fsync
//! seed = 42
//! delta = "1/100"
//! fairness-bound = 6
//! adversary = "round-robin"
//! rigid = false            # fsync only
//! ```

use crate::algorithms::AlgorithmId;
use crate::configuration::{ConfigError, Configuration};
use crate::geometry::{format_scalar, parse_scalar, rat, Scalar, ScalarParseError, Space};
use crate::scheduler::{AdversaryKind, Policy, PolicyError, SchedKind};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_TICKS: u64 = 1_000_000;

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub config: Configuration,
    pub algorithm: AlgorithmId,
    pub policy: Policy,
    pub max_ticks: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ScenarioDoc {
    algorithm: Option<String>,
    positions: Vec<String>,
    max_ticks: Option<u64>,
    space: SpaceDoc,
    policy: Option<PolicyDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct SpaceDoc {
    kind: String,
    a: Option<String>,
    b: Option<String>,
    circumference: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct PolicyDoc {
    kind: Option<String>,
    seed: Option<u64>,
    delta: Option<String>,
    fairness_bound: Option<u64>,
    adversary: Option<String>,
    rigid: Option<bool>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let doc: ScenarioDoc = toml::from_str(text)?;
        Scenario::from_doc(doc)
    }

    fn from_doc(doc: ScenarioDoc) -> Result<Scenario, ScenarioError> {
        let space = match doc.space.kind.as_str() {
            "segment" => {
                let a = required(&doc.space.a, "space.a")?;
                let b = required(&doc.space.b, "space.b")?;
                Space::segment(a, b).map_err(|e| ScenarioError::Invalid(e.to_string()))?
            }
            "circle" => {
                let c = required(&doc.space.circumference, "space.circumference")?;
                Space::circle(c).map_err(|e| ScenarioError::Invalid(e.to_string()))?
            }
            other => {
                return Err(ScenarioError::Invalid(format!(
                    "unknown space kind `{other}` (expected `segment` or `circle`)"
                )))
            }
        };
        let positions = doc
            .positions
            .iter()
            .map(|s| parse_scalar(s))
            .collect::<Result<Vec<Scalar>, _>>()?;
        let config = Configuration::new(space, positions)?;

        let algorithm = match &doc.algorithm {
            None => AlgorithmId::Dispatch,
            Some(name) => name
                .parse::<AlgorithmId>()
                .map_err(ScenarioError::Invalid)?,
        };

        let p = doc.policy.unwrap_or(PolicyDoc {
            kind: None,
            seed: None,
            delta: None,
            fairness_bound: None,
            adversary: None,
            rigid: None,
        });
        let kind = match &p.kind {
            None => SchedKind::Async,
            Some(k) => k.parse::<SchedKind>().map_err(ScenarioError::Invalid)?,
        };
        let adversary = match &p.adversary {
            None => AdversaryKind::RoundRobin,
            Some(a) => a.parse::<AdversaryKind>().map_err(ScenarioError::Invalid)?,
        };
        let delta = match &p.delta {
            None => config.space().extent() / rat(16, 1),
            Some(d) => parse_scalar(d)?,
        };
        let policy = Policy {
            kind,
            seed: p.seed.unwrap_or(0),
            delta,
            fairness_bound: p.fairness_bound.unwrap_or(config.n() as u64),
            adversary,
            rigid: p.rigid.unwrap_or(false),
        };
        policy.validate()?;

        Ok(Scenario {
            config,
            algorithm,
            policy,
            max_ticks: doc.max_ticks.unwrap_or(DEFAULT_MAX_TICKS),
        })
    }

    pub fn to_toml(&self) -> String {
        let space = match self.config.space() {
            Space::Segment { a, b } => SpaceDoc {
                kind: "segment".into(),
                a: Some(format_scalar(a)),
                b: Some(format_scalar(b)),
                circumference: None,
            },
            Space::Circle { circumference } => SpaceDoc {
                kind: "circle".into(),
                a: None,
                b: None,
                circumference: Some(format_scalar(circumference)),
            },
        };
        let doc = ScenarioDoc {
            algorithm: Some(self.algorithm.to_string()),
            positions: self
                .config
                .positions()
                .iter()
                .map(format_scalar)
                .collect(),
            max_ticks: Some(self.max_ticks),
            space,
            policy: Some(PolicyDoc {
                kind: Some(self.policy.kind.to_string()),
                seed: Some(self.policy.seed),
                delta: Some(format_scalar(&self.policy.delta)),
                fairness_bound: Some(self.policy.fairness_bound),
                adversary: Some(self.policy.adversary.to_string()),
                rigid: Some(self.policy.rigid),
            }),
        };
        toml::to_string(&doc).expect("scenario documents always serialize")
    }
}

fn required(field: &Option<String>, name: &str) -> Result<Scalar, ScenarioError> {
    match field {
        Some(text) => Ok(parse_scalar(text)?),
        None => Err(ScenarioError::Invalid(format!("missing field `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::int;

    const CIRCLE_SCENARIO: &str = r#"
algorithm = "dispatch"
positions = ["0", "1/4", "3/4"]

[space]
kind = "circle"
circumference = "1"

[policy]
kind = "async"
seed = 42
delta = "1/100"
fairness-bound = 3
adversary = "pending-maximizer"
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::parse(CIRCLE_SCENARIO).unwrap();
        assert_eq!(s.config.n(), 3);
        assert_eq!(s.policy.seed, 42);
        assert_eq!(s.policy.delta, rat(1, 100));
        let again = Scenario::parse(&s.to_toml()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn rejects_duplicates_with_dedicated_error() {
        let text = r#"
positions = ["1/4", "1/4"]
[space]
kind = "circle"
circumference = "1"
"#;
        match Scenario::parse(text) {
            Err(ScenarioError::Config(ConfigError::DuplicatePosition(p))) => {
                assert_eq!(p, "1/4")
            }
            other => panic!("expected duplicate-position error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_fill_in() {
        let text = r#"
positions = ["0", "1/2"]
[space]
kind = "segment"
a = "0"
b = "1"
"#;
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.algorithm, AlgorithmId::Dispatch);
        assert_eq!(s.policy.kind, SchedKind::Async);
        assert_eq!(s.policy.fairness_bound, 2);
        assert_eq!(s.policy.delta, int(1) / rat(16, 1));
        assert_eq!(s.max_ticks, DEFAULT_MAX_TICKS);
    }

    #[test]
    fn rejects_malformed_rationals_and_unknown_fields() {
        let bad_rat = r#"
positions = ["0", "one-half"]
[space]
kind = "circle"
circumference = "1"
"#;
        assert!(matches!(
            Scenario::parse(bad_rat),
            Err(ScenarioError::Scalar(_))
        ));
        let unknown = r#"
positions = ["0"]
velocity = 3
[space]
kind = "circle"
circumference = "1"
"#;
        assert!(matches!(
            Scenario::parse(unknown),
            Err(ScenarioError::Toml(_))
        ));
    }
}
