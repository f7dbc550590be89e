//! `ltlab`: experiment runner for Schrödinger spectra and Lieb–Thirring bounds.
//!
//! Exit codes: 0 success, 1 failed acceptance criterion, 2 configuration
//! error, 3 numerical or output failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{ExperimentConfig, Overrides};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("output failure: {0}")]
    Output(String),
    #[error("acceptance criteria failed: {0}")]
    AcceptanceFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::AcceptanceFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Output(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ltlab",
    version,
    about = "Schrödinger spectra, Riesz means and Lieb-Thirring bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON). Built-in defaults are used when absent.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for independent tasks.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    /// Seed for randomized families; overrides `seed`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Grid points; overrides `grid_points`.
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Truncation radius; overrides `truncation_radius`.
    #[arg(long, global = true, value_name = "R")]
    radius: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Negative eigenvalues of every configured potential.
    Spectrum,
    /// Riesz mean against C·∫V₋^{γ+n/2} for every potential, γ and constant source.
    BoundCheck,
    /// Birman–Schwinger counts along an energy ladder.
    Bs,
    /// Kinetic-energy inequality, densities and Slater checks for orthonormal families.
    Kinetic,
    /// Table of semiclassical, conjectured and sharp constants and K_n.
    Constants,
    /// Run the acceptance suite.
    Accept,
    /// Print the effective configuration as JSON.
    ShowConfig,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(&Overrides {
        out: cli.out.clone(),
        seed: cli.seed,
        grid: cli.grid,
        radius: cli.radius,
    });
    cfg.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&cfg),
        Command::BoundCheck => commands::cmd_bound_check(&cfg),
        Command::Bs => commands::cmd_bs(&cfg),
        Command::Kinetic => commands::cmd_kinetic(&cfg),
        Command::Constants => commands::cmd_constants(&cfg),
        Command::Accept => commands::cmd_accept(&cfg).map(|_| ()),
        Command::ShowConfig => {
            println!(
                "{}",
                serde_json::to_string_pretty(&cfg).expect("config serializes")
            );
            Ok(())
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ltlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
