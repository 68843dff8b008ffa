//! `minkabs`: verification suites and the causality demonstration for the
//! lattice Newton–Wigner model.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
//! usage or configuration error.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;
use report::RunReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Parser)]
#[command(name = "minkabs", version, about = "Newton-Wigner localization: covariance checks and acausal spreading")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry and group invariant suites.
    VerifyGeometry(Common),
    /// Imprimitivity and position-operator covariance checks with a boost
    /// convergence table.
    VerifyCovariance(Common),
    /// Leakage sweeps over time step and observer rapidity, plus the
    /// commutator witness.
    DemoCausality(Common),
}

#[derive(Args)]
struct Common {
    /// Flat JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Lattice points per axis.
    #[arg(long)]
    lattice: Option<usize>,
    /// JSON report (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV instead of JSON: the sweep rows for demo-causality, the check
    /// table otherwise.
    #[arg(long)]
    csv: bool,
    /// Record wall-clock seconds per check. Reports stop being byte-identical
    /// across runs.
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.lattice {
            cfg.lattice = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, report: &RunReport) -> Result<(), CliError> {
        let text = if self.csv { report.to_csv() } else { report.to_json() };
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
                path: path.clone(),
                source,
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("MINKABS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("MINKABS_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (common, report) = match &cli.command {
        Command::VerifyGeometry(c) => (c, suites::verify_geometry(&c.resolve()?, c.timing)),
        Command::VerifyCovariance(c) => (c, suites::verify_covariance(&c.resolve()?, c.timing)?),
        Command::DemoCausality(c) => (c, suites::demo_causality(&c.resolve()?, c.timing)?),
    };
    common.emit(&report)?;
    for check in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {} (N={}): {:?}", check.name, check.lattice, check.residual);
    }
    Ok(report.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("minkabs: {e}");
            ExitCode::from(2)
        }
    }
}
