//! `cyfibre`: periods, BPS tables, verification reports and modular fits.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{FileConfig, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error(transparent)]
    Lib(#[from] cyfibre::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) | CliError::Lib(cyfibre::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cyfibre", version, about = "Exact periods, mirror maps and BPS invariants of elliptic Calabi-Yau families")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Global {
    /// JSON file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named model (`main4`, `sl2z_n3`, `g0_2_n4`, ...) or table row (`row0`..`row8`).
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a2: Option<String>,
    /// Cap on the first variable.
    #[arg(long, global = true)]
    d1: Option<usize>,
    /// Cap on the second variable.
    #[arg(long, global = true)]
    d2: Option<usize>,
    #[arg(long, global = true)]
    t_order: Option<usize>,
    #[arg(long, global = true)]
    gamma: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frobenius periods and slice constants.
    Periods(commands::PeriodsArgs),
    /// Genus-zero invariants of the main example.
    Gw(commands::GwArgs),
    /// Runs the consistency suite.
    Verify(commands::VerifyArgs),
    /// Decomposes a q-series into quasi-modular forms.
    Fit(commands::FitArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(file, &cli.global)?;
    let (text, verdict) = match &cli.command {
        Command::Periods(a) => (commands::periods(&cfg, a)?, Ok(())),
        Command::Gw(a) => (commands::gw(&cfg, a)?, Ok(())),
        Command::Verify(a) => commands::verify(&cfg, a)?,
        Command::Fit(a) => (commands::fit(&cfg, a)?, Ok(())),
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    verdict
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
