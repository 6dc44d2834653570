//! `qstab`: batch front end for quantum cohomology central charges,
//! mutation flows and paths of stability conditions on projective spaces.
//!
//! Every subcommand reads one declarative configuration file (TOML, or JSON
//! when the file name ends in `.json`), prints its JSON report to standard
//! output and, with `--out DIR`, writes the report and any tables to `DIR`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 non-generic configuration, 1 file system failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{CommandOutput, RunOptions};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qstab", version, about = "Central charges, mutation flows and stability paths on projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (TOML, or JSON for `.json` files).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Integrator tolerance, overriding `tolerances.ode`.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Eigenvalues, idempotents and grading operator.
    Quantum,
    /// Mutation flow under phase rotation and motion of τ.
    Flow,
    /// Path of stability conditions and its limit decomposition.
    Path,
    /// Validation of a stability datum.
    StabilityCheck,
    /// Small-radius limits of rescaled central charges.
    Asymptotics,
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config FILE is required".into()))?;
    let config = RunConfig::load(path)?;
    let options = RunOptions { tol: cli.tol, seed: cli.seed };
    let output = match cli.command {
        Command::Quantum => commands::cmd_quantum(&config)?,
        Command::Flow => commands::cmd_flow(&config)?,
        Command::Path => commands::cmd_path(&config)?,
        Command::StabilityCheck => commands::cmd_stability_check(&config, options)?,
        Command::Asymptotics => commands::cmd_asymptotics(&config, options)?,
    };
    if let Some(dir) = &cli.out {
        for (name, contents) in &output.files {
            output::write_atomic(dir, name, contents)?;
        }
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{}", output.report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
