//! Command-line interface: classify scenarios, compute targets, run the
//! simulator, verify traces, cross-check the oracle, and demonstrate the
//! unsolvable classes.
//!
//! Exit codes: 0 success/verified, 2 refused (unsolvable class), 3 invariant
//! violation, 4 parse/usage error, 5 tick budget exceeded.

use clap::{Parser, Subcommand};
use minsum_coverage::algorithms::{analyze, move_plan};
use minsum_coverage::assignment::{
    brute_force_circle_optimum, brute_force_line_optimum, extremal_set, segment_optimal_cost,
};
use minsum_coverage::geometry::{format_scalar, parse_scalar, Scalar, Space};
use minsum_coverage::harness::demo::{demo_impossibility, DemoOutcome};
use minsum_coverage::harness::scenario::Scenario;
use minsum_coverage::harness::trace::{parse_trace, serialize_trace};
use minsum_coverage::harness::verify::verify_trace;
use minsum_coverage::scheduler::{run, Event, RunOutcome};
use serde_json::json;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_REFUSED: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_BUDGET: u8 = 5;

#[derive(Parser)]
#[command(
    name = "minsum-coverage",
    about = "Exact simulator and verifier for min-sum uniform coverage by oblivious robots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the configuration class, symmetry report and extremal set.
    Classify {
        scenario: PathBuf,
        /// Also print a machine-readable JSON line.
        #[arg(long)]
        json: bool,
    },
    /// Print the per-robot target table and the optimal total cost.
    Targets { scenario: PathBuf },
    /// Execute the scenario and write its trace.
    Run {
        scenario: PathBuf,
        /// Trace output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a per-tick position table (tick, robot, coord).
        #[arg(long)]
        emit_positions: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Rigidity constant, e.g. `1/100`.
        #[arg(long)]
        delta: Option<String>,
        /// Fairness window in ticks.
        #[arg(long)]
        fairness: Option<u64>,
        /// round-robin | seeded-random | symmetry-preserving | pending-maximizer
        #[arg(long)]
        adversary: Option<String>,
        #[arg(long)]
        max_ticks: Option<u64>,
    },
    /// Re-check every invariant of a recorded trace.
    Verify { trace: PathBuf, scenario: PathBuf },
    /// Compare the closed-form optimum with the brute-force oracle.
    Oracle {
        scenario: PathBuf,
        /// Number of uniform rotation-grid cells (robot offsets are always included).
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Drive every shipped rule on a refused scenario under the
    /// symmetry-preserving adversary and report axis persistence.
    DemoImpossibility {
        scenario: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Classify { scenario, json } => cmd_classify(&scenario, json),
        Command::Targets { scenario } => cmd_targets(&scenario),
        Command::Run {
            scenario,
            out,
            emit_positions,
            seed,
            delta,
            fairness,
            adversary,
            max_ticks,
        } => cmd_run(
            &scenario,
            out.as_deref(),
            emit_positions.as_deref(),
            seed,
            delta,
            fairness,
            adversary,
            max_ticks,
        ),
        Command::Verify { trace, scenario } => cmd_verify(&trace, &scenario),
        Command::Oracle { scenario, grid } => cmd_oracle(&scenario, grid),
        Command::DemoImpossibility {
            scenario,
            budget,
            seed,
        } => cmd_demo(&scenario, budget, seed),
    };
    ExitCode::from(code)
}

fn load_scenario(path: &FsPath) -> Result<Scenario, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    Scenario::parse(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })
}

fn cmd_classify(path: &FsPath, emit_json: bool) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let config = &scenario.config;
    match config.space() {
        Space::Segment { a, b } => {
            let orientation = config.segment_orientation();
            println!("space: segment [{}, {}]", format_scalar(a), format_scalar(b));
            println!("robots: {}", config.n());
            println!("mirror-symmetric: {:?}", orientation);
            if emit_json {
                println!(
                    "{}",
                    json!({
                        "space": "segment",
                        "n": config.n(),
                        "orientation": format!("{orientation:?}"),
                    })
                );
            }
            EXIT_OK
        }
        Space::Circle { circumference } => {
            let analysis = analyze(config);
            println!(
                "space: circle (circumference {})",
                format_scalar(circumference)
            );
            println!("robots: {}", config.n());
            println!("class: {}", analysis.symmetry.class);
            println!("rotational-order: {}", analysis.symmetry.rotational_order);
            println!(
                "lines-of-symmetry: {}",
                analysis.symmetry.lines_of_symmetry.len()
            );
            for axis in &analysis.symmetry.lines_of_symmetry {
                println!("  axis {axis}");
            }
            println!("optimal-cost: {}", format_scalar(&analysis.cost.optimum));
            let extremal: Vec<String> = analysis
                .cost
                .extremal
                .iter()
                .map(|i| format!("{i}@{}", format_scalar(config.position(*i))))
                .collect();
            println!("extremal: {}", extremal.join(" "));
            for (i, cost) in analysis.cost.per_candidate.iter().enumerate() {
                println!(
                    "  anchor {i} @ {}: {}",
                    format_scalar(config.position(i)),
                    format_scalar(cost)
                );
            }
            if emit_json {
                println!(
                    "{}",
                    json!({
                        "space": "circle",
                        "n": config.n(),
                        "class": analysis.symmetry.class.to_string(),
                        "rotational_order": analysis.symmetry.rotational_order,
                        "axes": analysis.symmetry.lines_of_symmetry.iter()
                            .map(|a| a.to_string()).collect::<Vec<_>>(),
                        "optimum": format_scalar(&analysis.cost.optimum),
                        "extremal": analysis.cost.extremal.iter().copied().collect::<Vec<_>>(),
                    })
                );
            }
            if analysis.symmetry.class.solvable() {
                EXIT_OK
            } else {
                EXIT_REFUSED
            }
        }
    }
}

fn cmd_targets(path: &FsPath) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let config = &scenario.config;
    if let Space::Circle { .. } = config.space() {
        let analysis = analyze(config);
        if !analysis.symmetry.class.solvable() {
            println!("class: {} (refused: no deterministic assignment)", analysis.symmetry.class);
            return EXIT_REFUSED;
        }
    }
    let plan = match move_plan(config, scenario.algorithm) {
        Ok(plan) => plan,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let Some(ts) = &plan.targets else {
        println!("no destination assignment for this snapshot");
        return EXIT_REFUSED;
    };
    let mut total = Scalar::from_integer(0.into());
    println!("robot  position  target  direction  distance");
    for i in 0..config.n() {
        let target = ts.target_of(i);
        let (dir, dist) = match config.space() {
            Space::Circle { circumference } => {
                let d = minsum_coverage::geometry::arc_distance(
                    config.position(i),
                    target,
                    circumference,
                );
                let cw =
                    minsum_coverage::geometry::directed_arc(
                        config.position(i),
                        target,
                        minsum_coverage::geometry::Dir::Cw,
                        circumference,
                    ) == d;
                (if d == Scalar::from_integer(0.into()) {
                    "-"
                } else if cw {
                    "cw"
                } else {
                    "ccw"
                }, d)
            }
            Space::Segment { .. } => {
                let d = minsum_coverage::geometry::segment_distance(config.position(i), target);
                let dir = if target > config.position(i) {
                    "right"
                } else if target < config.position(i) {
                    "left"
                } else {
                    "-"
                };
                (dir, d)
            }
        };
        total += &dist;
        println!(
            "{i}  {}  {}  {dir}  {}",
            format_scalar(config.position(i)),
            format_scalar(target),
            format_scalar(&dist)
        );
    }
    println!("total-optimal-cost: {}", format_scalar(&total));
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    path: &FsPath,
    out: Option<&FsPath>,
    emit_positions: Option<&FsPath>,
    seed: Option<u64>,
    delta: Option<String>,
    fairness: Option<u64>,
    adversary: Option<String>,
    max_ticks: Option<u64>,
) -> u8 {
    let mut scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(seed) = seed {
        scenario.policy.seed = seed;
    }
    if let Some(delta) = delta {
        match parse_scalar(&delta) {
            Ok(d) => scenario.policy.delta = d,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_PARSE;
            }
        }
    }
    if let Some(k) = fairness {
        scenario.policy.fairness_bound = k;
    }
    if let Some(adv) = adversary {
        match adv.parse() {
            Ok(a) => scenario.policy.adversary = a,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_PARSE;
            }
        }
    }
    if let Some(t) = max_ticks {
        scenario.max_ticks = t;
    }

    let report = match run(
        &scenario.config,
        scenario.algorithm,
        &scenario.policy,
        scenario.max_ticks,
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VIOLATION;
        }
    };

    if let Some(out) = out {
        if let Err(e) = std::fs::write(out, serialize_trace(&report.trace)) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return EXIT_PARSE;
        }
    }
    if let Some(path) = emit_positions {
        let mut table = String::from("tick\trobot\tcoord\n");
        let mut positions: Vec<Scalar> = scenario.config.positions().to_vec();
        let dump = |tick: u64, positions: &[Scalar], table: &mut String| {
            for (id, p) in positions.iter().enumerate() {
                table.push_str(&format!("{tick}\t{id}\t{}\n", format_scalar(p)));
            }
        };
        dump(0, &positions, &mut table);
        let mut last_dumped = 0u64;
        for event in &report.trace.events {
            if let Event::Displaced {
                tick, robot, to, ..
            } = event
            {
                if *tick != last_dumped && last_dumped != 0 {
                    dump(last_dumped, &positions, &mut table);
                }
                positions[*robot] = to.clone();
                last_dumped = *tick;
            }
        }
        if last_dumped != 0 {
            dump(last_dumped, &positions, &mut table);
        }
        if let Err(e) = std::fs::write(path, table) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_PARSE;
        }
    }

    println!("ticks: {}", report.ticks);
    println!(
        "total-displaced: {}",
        format_scalar(&report.total_displaced)
    );
    if let Some(frozen) = &report.frozen {
        println!("optimal-cost: {}", format_scalar(&frozen.optimal_cost));
    }
    match &report.outcome {
        RunOutcome::Converged { tick } => {
            println!("outcome: converged at tick {tick}");
            EXIT_OK
        }
        RunOutcome::Refused(class) => {
            println!("outcome: refused ({class})");
            EXIT_REFUSED
        }
        RunOutcome::Collision { tick } => {
            println!("outcome: collision at tick {tick}");
            EXIT_VIOLATION
        }
        RunOutcome::TickBudgetExceeded => {
            println!("outcome: tick budget exceeded");
            EXIT_BUDGET
        }
    }
}

fn cmd_verify(trace_path: &FsPath, scenario_path: &FsPath) -> u8 {
    let scenario = match load_scenario(scenario_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let text = match std::fs::read_to_string(trace_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", trace_path.display());
            return EXIT_PARSE;
        }
    };
    let trace = match parse_trace(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let report = verify_trace(&scenario, &trace);
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        match check.first_violation_tick {
            Some(tick) => println!("{status} {}: {} (first at tick {tick})", check.name, check.detail),
            None => println!("{status} {}: {}", check.name, check.detail),
        }
    }
    if report.all_passed() {
        println!("verified: all checks passed");
        EXIT_OK
    } else {
        println!("verified: FAILED");
        EXIT_VIOLATION
    }
}

fn cmd_oracle(path: &FsPath, grid: usize) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let config = &scenario.config;
    match config.space() {
        Space::Circle { .. } => {
            let report = extremal_set(config);
            let brute = match brute_force_circle_optimum(config, grid) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            println!("anchors: {}", report.per_candidate.len());
            println!("closed-form-optimum: {}", format_scalar(&report.optimum));
            println!("brute-force-minimum: {}", format_scalar(&brute.cost));
            if report.optimum == brute.cost {
                println!("agreement: exact");
                EXIT_OK
            } else {
                println!("agreement: MISMATCH");
                EXIT_VIOLATION
            }
        }
        Space::Segment { .. } => {
            let closed = segment_optimal_cost(config).expect("segment space is valid");
            let brute = match brute_force_line_optimum(config) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            println!("closed-form-optimum: {}", format_scalar(&closed));
            println!("brute-force-minimum: {}", format_scalar(&brute.cost));
            if closed == brute.cost {
                println!("agreement: exact");
                EXIT_OK
            } else {
                println!("agreement: MISMATCH");
                EXIT_VIOLATION
            }
        }
    }
}

fn cmd_demo(path: &FsPath, budget: u64, seed: u64) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if !scenario.config.space().is_circle() {
        eprintln!("error: the impossibility demo applies to circle scenarios");
        return EXIT_PARSE;
    }
    let report = demo_impossibility(&scenario.config, budget, seed);
    println!("class: {}", report.class);
    println!("axes: {}", report.axes.len());
    for axis in &report.axes {
        println!("  axis {axis}");
    }
    println!("budget: {} ticks", report.budget);
    for demo in &report.per_algorithm {
        let outcome = match &demo.outcome {
            DemoOutcome::NeverConverged => "never converged".to_string(),
            DemoOutcome::Converged { tick } => format!("converged at tick {tick}"),
            DemoOutcome::RuleError(e) => format!("rule refused ({e})"),
        };
        println!(
            "{}: {} | axes retained: {} | displacements: {}",
            demo.algorithm, outcome, demo.axes_retained, demo.displacements
        );
    }
    if report.class.solvable() {
        println!("control case: class is solvable");
        EXIT_OK
    } else if report.symmetry_persisted() {
        println!("symmetry persisted for the whole budget; no rule converged");
        EXIT_OK
    } else {
        println!("UNEXPECTED: symmetry was broken or a rule converged");
        EXIT_VIOLATION
    }
}
