//! Command-line front end: generate chain profiles, pick checkpoints with
//! any registered solver, replay training memory, and compare solvers.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use remat::{
    generate_builtin, generate_random, simulate, validate_plan, BuiltinModel, CheckpointPlan,
    CostModel, LayerProfile, SimMode, SolveError, SolveResult, SolverRegistry,
};

#[derive(Parser)]
#[command(
    name = "remat",
    version,
    about = "Plan activation checkpoints for layer chains and replay their training memory"
)]
struct Cli {
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format for solve, simulate, and compare
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in model profile as JSON
    GenModel {
        /// One of: vgg19, alexnet_plain, alexnet_fine
        #[arg(long)]
        arch: BuiltinModel,
        #[arg(long, default_value_t = 128)]
        batch: u64,
        #[arg(long, default_value_t = 4)]
        bytes_per_element: u64,
        /// Fixed memory (weights, gradients, workspace) added to every phase
        #[arg(long, default_value_t = 0)]
        base_overhead_bytes: u64,
    },
    /// Write a random chain profile as JSON
    GenRandom {
        /// Number of layers after the input
        #[arg(long)]
        layers: usize,
        /// Activation sizes are uniform in [1, max-size]
        #[arg(long, default_value_t = 1_000_000)]
        max_size: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        base_overhead_bytes: u64,
    },
    /// Pick checkpoints for a profile with one solver
    Solve {
        #[arg(long)]
        profile: PathBuf,
        /// One of: static-dp, dynamic-n2, dynamic-linear, sqrt, brute-static, brute-dynamic
        #[arg(long)]
        solver: String,
        /// Objective for the sqrt baseline (static or dynamic); other
        /// solvers fix their own
        #[arg(long)]
        model: Option<CostModel>,
    },
    /// Replay one training step for a plan and check it against the formula
    Simulate {
        #[arg(long)]
        profile: PathBuf,
        /// Retention policy: none, static, or dynamic
        #[arg(long)]
        mode: SimMode,
        /// Comma-separated checkpoint indices, e.g. "0,3,11,24" (endpoints
        /// may be omitted)
        #[arg(long)]
        plan: Option<String>,
        /// Take the plan from this solver instead
        #[arg(long)]
        solver: Option<String>,
    },
    /// Run every solver on a profile and line up the simulated peaks
    Compare {
        #[arg(long)]
        profile: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

enum CliError {
    Usage(String),
    Data(String),
    Guard(String),
}

impl CliError {
    fn report(self) -> ExitCode {
        let (msg, code) = match self {
            CliError::Usage(m) => (m, 2),
            CliError::Data(m) => (m, 3),
            CliError::Guard(m) => (m, 4),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenModel {
            arch,
            batch,
            bytes_per_element,
            base_overhead_bytes,
        } => {
            let profile = generate_builtin(arch, batch, bytes_per_element)
                .and_then(|p| p.with_base_overhead(base_overhead_bytes))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&cli.output, &profile.to_json())
        }
        Command::GenRandom {
            layers,
            max_size,
            seed,
            base_overhead_bytes,
        } => {
            let profile = generate_random(layers, max_size, seed)
                .and_then(|p| p.with_base_overhead(base_overhead_bytes))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&cli.output, &profile.to_json())
        }
        Command::Solve {
            profile,
            solver,
            model,
        } => {
            let profile = load_profile(&profile)?;
            let result = run_solver(&profile, &solver, model)?;
            let text = render_solve(&profile, &result, cli.format)?;
            emit(&cli.output, &text)
        }
        Command::Simulate {
            profile,
            mode,
            plan,
            solver,
        } => {
            let profile = load_profile(&profile)?;
            let (plan, from_solver) = match (plan, solver) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(CliError::Usage(
                        "pass exactly one of --plan or --solver".into(),
                    ))
                }
                (Some(text), None) => (parse_plan(&text, profile.last_index())?, None),
                (None, Some(name)) => {
                    let result = run_solver(&profile, &name, None)?;
                    (result.plan, Some(name))
                }
            };
            let text = render_simulate(&profile, &plan, mode, from_solver, cli.format)?;
            emit(&cli.output, &text)
        }
        Command::Compare { profile } => {
            let profile = load_profile(&profile)?;
            let text = render_compare(&profile, cli.format)?;
            emit(&cli.output, &text)
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write as _;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end_matches('\n')) {
                Ok(()) => Ok(()),
                // a closed pipe (e.g. | head) is not an error worth reporting
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Data(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn load_profile(path: &PathBuf) -> Result<LayerProfile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    LayerProfile::from_json(&text)
        .map_err(|e| CliError::Data(format!("bad profile {}: {e}", path.display())))
}

fn run_solver(
    profile: &LayerProfile,
    name: &str,
    model: Option<CostModel>,
) -> Result<SolveResult, CliError> {
    let registry = SolverRegistry::with_defaults();
    if let Some(model) = model {
        if name != "sqrt" {
            return Err(CliError::Usage(
                "--model only configures the sqrt baseline; every other solver fixes its own"
                    .into(),
            ));
        }
        return Ok(remat::solvers::solve_sqrt_baseline(profile, model));
    }
    let solver = registry.get(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown solver {name:?} (available: {})",
            registry.names().join(", ")
        ))
    })?;
    solver.solve(profile).map_err(|e| match e {
        SolveError::TooLarge { .. } => CliError::Guard(e.to_string()),
    })
}

fn parse_plan(text: &str, last: usize) -> Result<CheckpointPlan, CliError> {
    let mut picks = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let idx: usize = part
            .parse()
            .map_err(|_| CliError::Usage(format!("bad checkpoint index {part:?} in --plan")))?;
        picks.push(idx);
    }
    picks.sort_unstable();
    picks.dedup();
    CheckpointPlan::from_interior(picks, last).map_err(|e| CliError::Usage(e.to_string()))
}

/// Decimal megabytes with two decimals, for human-readable columns.
fn mb(bytes: u64) -> String {
    format!("{:.2} MB", bytes as f64 / 1e6)
}

#[derive(Serialize)]
struct SolveOut<'a> {
    solver: &'a str,
    model: CostModel,
    base_overhead_bytes: u64,
    /// Peak prediction including the base overhead.
    predicted_peak_bytes: u64,
    checkpoints: Vec<usize>,
    checkpoint_names: Vec<String>,
}

fn render_solve(
    profile: &LayerProfile,
    result: &SolveResult,
    format: Format,
) -> Result<String, CliError> {
    let out = SolveOut {
        solver: result.solver,
        model: result.model,
        base_overhead_bytes: profile.base_overhead(),
        predicted_peak_bytes: profile.base_overhead() + result.predicted_peak,
        checkpoints: result.plan.indices().to_vec(),
        checkpoint_names: result
            .plan
            .indices()
            .iter()
            .map(|&i| profile.layers()[i].name.clone())
            .collect(),
    };
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Csv => Err(CliError::Usage(
            "csv output applies to simulate and compare only".into(),
        )),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "solver:         {}", out.solver);
            let _ = writeln!(t, "model:          {}", out.model);
            let _ = writeln!(
                t,
                "predicted peak: {} bytes ({})",
                out.predicted_peak_bytes,
                mb(out.predicted_peak_bytes)
            );
            let picks: Vec<String> = out
                .checkpoints
                .iter()
                .zip(&out.checkpoint_names)
                .map(|(i, n)| format!("{i} ({n})"))
                .collect();
            let _ = writeln!(t, "checkpoints:    {}", picks.join(", "));
            Ok(t)
        }
    }
}

#[derive(Serialize)]
struct PointOut {
    phase: usize,
    label: String,
    bytes: u64,
}

#[derive(Serialize)]
struct SimOut {
    mode: SimMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<String>,
    checkpoints: Vec<usize>,
    base_overhead_bytes: u64,
    predicted_peak_bytes: u64,
    simulated_peak_bytes: u64,
    forward_peak_bytes: u64,
    backward_peak_bytes: u64,
    matches_prediction: bool,
    points: Vec<PointOut>,
}

fn render_simulate(
    profile: &LayerProfile,
    plan: &CheckpointPlan,
    mode: SimMode,
    solver: Option<String>,
    format: Format,
) -> Result<String, CliError> {
    let trace = simulate(profile, plan, mode).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = validate_plan(profile, plan, mode).expect("same plan simulated above");
    let out = SimOut {
        mode,
        solver,
        checkpoints: plan.indices().to_vec(),
        base_overhead_bytes: profile.base_overhead(),
        predicted_peak_bytes: report.predicted_peak,
        simulated_peak_bytes: report.simulated_peak,
        forward_peak_bytes: report.simulated_forward_peak,
        backward_peak_bytes: report.simulated_backward_peak,
        matches_prediction: report.matches_prediction,
        points: trace
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| PointOut {
                phase: i,
                label: p.label.clone(),
                bytes: p.bytes,
            })
            .collect(),
    };
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Csv => Ok(trace.to_csv()),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "mode:           {}", out.mode);
            if let Some(s) = &out.solver {
                let _ = writeln!(t, "solver:         {s}");
            }
            let _ = writeln!(
                t,
                "checkpoints:    {}",
                out.checkpoints
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let _ = writeln!(
                t,
                "predicted peak: {} bytes ({})",
                out.predicted_peak_bytes,
                mb(out.predicted_peak_bytes)
            );
            let _ = writeln!(
                t,
                "simulated peak: {} bytes ({}), prediction {}",
                out.simulated_peak_bytes,
                mb(out.simulated_peak_bytes),
                if out.matches_prediction {
                    "matched"
                } else {
                    "MISSED"
                }
            );
            let _ = writeln!(t);
            let _ = writeln!(t, "{:>5}  {:<14} {:>16}", "phase", "label", "bytes");
            for p in &out.points {
                let _ = writeln!(t, "{:>5}  {:<14} {:>16}", p.phase, p.label, p.bytes);
            }
            Ok(t)
        }
    }
}

#[derive(Serialize)]
struct CompareRow {
    solver: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<CostModel>,
    mode: SimMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_peak_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulated_peak_bytes: Option<u64>,
    /// Activation memory relative to no checkpointing (base excluded).
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_vs_none: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checkpoints: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn render_compare(profile: &LayerProfile, format: Format) -> Result<String, CliError> {
    let base = profile.base_overhead();
    let none_over_base: u64 = profile.sizes().iter().sum();
    let full_plan =
        CheckpointPlan::from_interior(std::iter::empty(), profile.last_index()).expect("valid");
    let none_trace = simulate(profile, &full_plan, SimMode::None).expect("plan ends the chain");

    let mut rows = vec![CompareRow {
        solver: "none".into(),
        model: None,
        mode: SimMode::None,
        predicted_peak_bytes: Some(base + none_over_base),
        simulated_peak_bytes: Some(none_trace.peak),
        ratio_vs_none: Some(1.0),
        checkpoints: None,
        error: None,
    }];

    let registry = SolverRegistry::with_defaults();
    for solver in registry.iter() {
        let mode = match solver.model() {
            CostModel::Static => SimMode::Static,
            CostModel::Dynamic => SimMode::Dynamic,
        };
        match solver.solve(profile) {
            Ok(result) => {
                let trace =
                    simulate(profile, &result.plan, mode).expect("solver plans end the chain");
                rows.push(CompareRow {
                    solver: solver.name().into(),
                    model: Some(result.model),
                    mode,
                    predicted_peak_bytes: Some(base + result.predicted_peak),
                    simulated_peak_bytes: Some(trace.peak),
                    ratio_vs_none: Some((trace.peak - base) as f64 / none_over_base as f64),
                    checkpoints: Some(result.plan.indices().to_vec()),
                    error: None,
                });
            }
            Err(e) => rows.push(CompareRow {
                solver: solver.name().into(),
                model: Some(solver.model()),
                mode,
                predicted_peak_bytes: None,
                simulated_peak_bytes: None,
                ratio_vs_none: None,
                checkpoints: None,
                error: Some(e.to_string()),
            }),
        }
    }
    rows.sort_by_key(|r| r.simulated_peak_bytes.unwrap_or(u64::MAX));

    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&rows).expect("serializable")),
        Format::Csv => {
            let mut t = String::from(
                "solver,model,mode,predicted_peak_bytes,simulated_peak_bytes,ratio_vs_none,error\n",
            );
            for r in &rows {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{},{}",
                    r.solver,
                    r.model.map(|m| m.to_string()).unwrap_or_default(),
                    r.mode,
                    r.predicted_peak_bytes
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                    r.simulated_peak_bytes
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                    r.ratio_vs_none
                        .map(|v| format!("{v:.4}"))
                        .unwrap_or_default(),
                    r.error.as_deref().unwrap_or_default()
                );
            }
            Ok(t)
        }
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(
                t,
                "{:<15} {:<8} {:<8} {:>16} {:>16} {:>9}",
                "solver", "model", "mode", "predicted", "simulated", "vs none"
            );
            for r in &rows {
                match (&r.error, r.predicted_peak_bytes, r.simulated_peak_bytes) {
                    (None, Some(p), Some(s)) => {
                        let _ = writeln!(
                            t,
                            "{:<15} {:<8} {:<8} {:>16} {:>16} {:>9.4}",
                            r.solver,
                            r.model.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
                            r.mode,
                            p,
                            s,
                            r.ratio_vs_none.unwrap_or(f64::NAN)
                        );
                    }
                    _ => {
                        let _ = writeln!(
                            t,
                            "{:<15} {:<8} {:<8} {}",
                            r.solver,
                            r.model.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
                            r.mode,
                            r.error.as_deref().unwrap_or("-")
                        );
                    }
                }
            }
            Ok(t)
        }
    }
}
