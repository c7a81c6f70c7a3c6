//! `resonator`: command-line front end for the flux-qubit resonator
//! toolkit: trajectory simulation, parameter sweeps, drive-exponent
//! optimization, and parameter validation, with deterministic CSV/JSON
//! outputs.
//!
//! Exit codes: 0 success, 2 invalid input or parameters, 3 numerical
//! failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Overrides;

/// A command failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<resonator_core::Error> for Failure {
    fn from(e: resonator_core::Error) -> Self {
        match &e {
            resonator_core::Error::NumericalFailure { .. } => Failure::numerical(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "resonator",
    version,
    about = "Flux-qubit resonator toolkit: adiabatic invariant simulation and drive optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration; writes trajectory.csv and summary.json
    Simulate(RunArgs),
    /// Run a parameter sweep; writes one CSV per value and metrics.json
    Sweep(RunArgs),
    /// Search for the drive exponent minimizing late-window invariant drift
    Optimize(OptimizeArgs),
    /// Check frequency positivity over the horizon; prints a JSON report
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a TOML run configuration
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Named preset: fig1, fig2, or fig3
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Directory searched for <preset>.toml before the built-in copies
    #[arg(long, value_name = "DIR")]
    presets_dir: Option<PathBuf>,

    /// Output directory (default: out; validate prints to stdout unless set)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Override the horizon end (the start is always 0)
    #[arg(long, value_name = "T")]
    horizon: Option<f64>,

    /// Override the metrics window
    #[arg(long, num_args = 2, value_names = ["START", "END"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,

    /// Suppress status output
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Exponent search interval
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    search: Option<Vec<f64>>,

    /// Final bracket width for the exponent search
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
}

fn overrides_from(run: &RunArgs, search: Option<&[f64]>, tol: Option<f64>) -> Overrides {
    Overrides {
        horizon_end: run.horizon,
        window: run.window.as_ref().map(|w| (w[0], w[1])),
        search: search.map(|s| (s[0], s[1])),
        tol,
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Simulate(run) => {
            let cfg = config::load(
                run.config.as_deref(),
                run.preset.as_deref(),
                run.presets_dir.as_deref(),
                &overrides_from(&run, None, None),
            )?;
            let out = run.out.unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_simulate(&cfg, &out, run.quiet)
        }
        Command::Sweep(run) => {
            let cfg = config::load(
                run.config.as_deref(),
                run.preset.as_deref(),
                run.presets_dir.as_deref(),
                &overrides_from(&run, None, None),
            )?;
            let out = run.out.unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_sweep(&cfg, &out, run.quiet)
        }
        Command::Optimize(args) => {
            let cfg = config::load(
                args.run.config.as_deref(),
                args.run.preset.as_deref(),
                args.run.presets_dir.as_deref(),
                &overrides_from(&args.run, args.search.as_deref(), args.tol),
            )?;
            let out = args.run.out.unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_optimize(&cfg, &out, args.run.quiet)
        }
        Command::Validate(run) => {
            let cfg = config::load(
                run.config.as_deref(),
                run.preset.as_deref(),
                run.presets_dir.as_deref(),
                &overrides_from(&run, None, None),
            )?;
            commands::cmd_validate(&cfg, run.out.as_deref(), run.quiet)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
