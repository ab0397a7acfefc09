//! Line-delimited trace files.
//!
//! The first line is the version header `trace v1`; every following line is
//! one event with a fixed field order, rationals rendered as `p` or `p/q`:
//!
//! ```text
//! activated <tick> <robot>
//! snapshot <tick> <robot> <pos0> <pos1> ...
//! decided <tick> <robot> stay
//! decided <tick> <robot> move <dest> <cw|ccw|seg>
//! displaced <tick> <robot> <from> <to> <amount>
//! collision <tick> <position> <robot,robot,...>
//! checkpoint <tick> <remaining-total> <robot,robot,...|->
//! converged <tick>
//! ```

use crate::algorithms::MoveDecision;
use crate::geometry::{format_scalar, parse_scalar, Dir, Path, Scalar};
use crate::scheduler::{Event, Trace};
use std::fmt::Write as _;

pub const TRACE_HEADER: &str = "trace v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace parse error at line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

pub fn serialize_trace(trace: &Trace) -> String {
    let mut out = String::new();
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for event in &trace.events {
        match event {
            Event::Activated { tick, robot } => {
                let _ = writeln!(out, "activated {tick} {robot}");
            }
            Event::Snapshot {
                tick,
                robot,
                positions,
            } => {
                let _ = write!(out, "snapshot {tick} {robot}");
                for p in positions {
                    let _ = write!(out, " {}", format_scalar(p));
                }
                out.push('\n');
            }
            Event::Decided {
                tick,
                robot,
                decision,
            } => match decision {
                MoveDecision::Stay => {
                    let _ = writeln!(out, "decided {tick} {robot} stay");
                }
                MoveDecision::Move { destination, path } => {
                    let dir = match path {
                        Path::Arc(Dir::Cw) => "cw",
                        Path::Arc(Dir::Ccw) => "ccw",
                        Path::Interval => "seg",
                    };
                    let _ = writeln!(
                        out,
                        "decided {tick} {robot} move {} {dir}",
                        format_scalar(destination)
                    );
                }
            },
            Event::Displaced {
                tick,
                robot,
                from,
                to,
                amount,
            } => {
                let _ = writeln!(
                    out,
                    "displaced {tick} {robot} {} {} {}",
                    format_scalar(from),
                    format_scalar(to),
                    format_scalar(amount)
                );
            }
            Event::Collision {
                tick,
                position,
                robots,
            } => {
                let _ = writeln!(
                    out,
                    "collision {tick} {} {}",
                    format_scalar(position),
                    join_ids(robots)
                );
            }
            Event::Checkpoint {
                tick,
                extremal,
                remaining_total,
            } => {
                let ids = if extremal.is_empty() {
                    "-".to_string()
                } else {
                    join_ids(extremal)
                };
                let _ = writeln!(
                    out,
                    "checkpoint {tick} {} {ids}",
                    format_scalar(remaining_total)
                );
            }
            Event::Converged { tick } => {
                let _ = writeln!(out, "converged {tick}");
            }
        }
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Trace, TraceParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        _ => {
            return Err(TraceParseError {
                line: 1,
                message: format!("missing `{TRACE_HEADER}` header"),
            })
        }
    }
    let mut events = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let fail = |message: String| TraceParseError {
            line: line_no,
            message,
        };
        let tick = |s: &str| -> Result<u64, TraceParseError> {
            s.parse().map_err(|_| fail(format!("bad tick `{s}`")))
        };
        let robot = |s: &str| -> Result<usize, TraceParseError> {
            s.parse().map_err(|_| fail(format!("bad robot id `{s}`")))
        };
        let scalar = |s: &str| -> Result<Scalar, TraceParseError> {
            parse_scalar(s).map_err(|e| fail(e.to_string()))
        };
        let event = match fields.as_slice() {
            ["activated", t, r] => Event::Activated {
                tick: tick(t)?,
                robot: robot(r)?,
            },
            ["snapshot", t, r, rest @ ..] => Event::Snapshot {
                tick: tick(t)?,
                robot: robot(r)?,
                positions: rest
                    .iter()
                    .map(|s| scalar(s))
                    .collect::<Result<Vec<_>, _>>()?,
            },
            ["decided", t, r, "stay"] => Event::Decided {
                tick: tick(t)?,
                robot: robot(r)?,
                decision: MoveDecision::Stay,
            },
            ["decided", t, r, "move", dest, dir] => {
                let path = match *dir {
                    "cw" => Path::Arc(Dir::Cw),
                    "ccw" => Path::Arc(Dir::Ccw),
                    "seg" => Path::Interval,
                    other => return Err(fail(format!("bad direction `{other}`"))),
                };
                Event::Decided {
                    tick: tick(t)?,
                    robot: robot(r)?,
                    decision: MoveDecision::Move {
                        destination: scalar(dest)?,
                        path,
                    },
                }
            }
            ["displaced", t, r, from, to, amount] => Event::Displaced {
                tick: tick(t)?,
                robot: robot(r)?,
                from: scalar(from)?,
                to: scalar(to)?,
                amount: scalar(amount)?,
            },
            ["collision", t, pos, ids] => Event::Collision {
                tick: tick(t)?,
                position: scalar(pos)?,
                robots: parse_ids(ids).map_err(&fail)?,
            },
            ["checkpoint", t, remaining, ids] => Event::Checkpoint {
                tick: tick(t)?,
                remaining_total: scalar(remaining)?,
                extremal: if *ids == "-" {
                    Vec::new()
                } else {
                    parse_ids(ids).map_err(&fail)?
                },
            },
            ["converged", t] => Event::Converged { tick: tick(t)? },
            _ => return Err(fail(format!("unrecognized record `{line}`"))),
        };
        events.push(event);
    }
    Ok(Trace { events })
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_ids(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|s| s.parse().map_err(|_| format!("bad id list `{text}`")))
        .collect()
}
