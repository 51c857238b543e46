//! Batch front end: reads a JSON run configuration, runs one problem and
//! writes `summary.json` plus CSV data files.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when a solver does not
//! converge, 1 on I/O failure.

mod config;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "hinged-plate", version, about = "Obstacle problems on partially hinged plates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Green function.
    GreenEval(Args),
    /// Linear solve without obstacles.
    Solve(Args),
    /// Obstacle problem solve.
    ViSolve(Args),
    /// Worst maximal gap over a force class.
    GapScan(Args),
    /// Best reinforcement over a candidate family.
    OptimizeReinforcement(Args),
    /// Best obstacle over a candidate list.
    OptimizeObstacle(Args),
    /// Classify an obstacle level against the threshold M.
    Regime(Args),
    /// List every invariant violation of a configuration without running it.
    Validate(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parallel scans.
    #[arg(long)]
    threads: Option<usize>,
    /// Series truncation order (overrides the configuration).
    #[arg(long)]
    m_max: Option<u32>,
    /// Mesh as NXxNY, e.g. 64x16 (overrides the configuration).
    #[arg(long, value_parser = parse_mesh)]
    mesh: Option<(usize, usize)>,
}

fn parse_mesh(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got {s}"))?;
    let nx = a.trim().parse().map_err(|e| format!("bad nx in {s}: {e}"))?;
    let ny = b.trim().parse().map_err(|e| format!("bad ny in {s}: {e}"))?;
    Ok((nx, ny))
}

fn load(args: &Args) -> Result<RunConfig, String> {
    let text = fs::read_to_string(&args.config).map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut config: RunConfig =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", args.config.display()))?;
    if let Some((nx, ny)) = args.mesh {
        config.mesh.nx = nx;
        config.mesh.ny = ny;
    }
    if let Some(m) = args.m_max {
        config.series.m_max = m;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::GreenEval(a) => (Some("green-eval"), a),
        Command::Solve(a) => (Some("solve"), a),
        Command::ViSolve(a) => (Some("vi-solve"), a),
        Command::GapScan(a) => (Some("gap-scan"), a),
        Command::OptimizeReinforcement(a) => (Some("optimize-reinforcement"), a),
        Command::OptimizeObstacle(a) => (Some("optimize-obstacle"), a),
        Command::Regime(a) => (Some("regime"), a),
        Command::Validate(a) => (None, a),
    };
    let config = match load(args) {
        Ok(c) => c,
        Err(e) => {
            if kind.is_none() {
                println!("{}", serde_json::json!([e]));
            }
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Some(kind) = kind else {
        let diagnostics = config.validate();
        println!("{}", serde_json::to_string_pretty(&diagnostics).expect("strings serialize"));
        return ExitCode::from(if diagnostics.is_empty() { 0 } else { 2 });
    };
    if config.problem.kind() != kind {
        eprintln!(
            "error: subcommand {kind} does not match the configured problem {}",
            config.problem.kind()
        );
        return ExitCode::from(2);
    }
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("hinged-plate-out"));
    match run::run(&config, &out) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
