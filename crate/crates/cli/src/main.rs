mod cache;
mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use queerlab::partitions::StrictPartition;
use thiserror::Error;

use crate::cache::Cache;
use crate::commands::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0} (pass --unsafe to override)")]
    Bounds(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Compute(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    HeckeIdeals,
    MainTheorem,
    Determinantal,
    Cauchy,
    PhiPsi,
    PropDim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Isotypic,
    QExpansion,
    Dims,
}

#[derive(Debug, Parser)]
#[command(name = "queerlab", version, about = "Exact checks for Hecke-Clifford algebras, Schur Q-functions and the queer bivariate algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Q₁·Q_λ against the Pieri rule for |λ| ≤ --degree (default 8).
    Pieri,
    /// Run one verification and report every case.
    Verify { target: Target },
    /// Write a table.
    Dump { table: Table },
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Rank of the left factor, or of H_n / q_n.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Rank of the right factor.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Largest Hecke-Clifford rank.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Largest degree of A, or largest |α|, |β| for prop-dim.
    #[arg(long, global = true)]
    pub dmax: Option<usize>,
    /// Degree bound: Pieri size, Cauchy degree, prop-dim r, or table size.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Number of variables for Cauchy.
    #[arg(long, global = true)]
    pub vars: Option<usize>,
    #[arg(long = "jet-order", global = true)]
    pub jet_order: Option<usize>,
    /// A strict partition such as 3,1.
    #[arg(long, global = true)]
    pub lambda: Option<StrictPartition>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Allow sizes beyond the safe bounds.
    #[arg(long = "unsafe", global = true)]
    pub allow_unsafe: bool,
}

pub const MAX_H_RANK: usize = 5;
pub const MAX_A_RANK: usize = 3;
pub const MAX_DEGREE: usize = 6;
pub const MAX_PIERI: usize = 8;

impl Config {
    pub fn bound(&self, name: &str, value: usize, max: usize) -> Result<usize, CliError> {
        if value > max && !self.allow_unsafe {
            return Err(CliError::Bounds(format!("--{name} {value} exceeds {max}")));
        }
        Ok(value)
    }

    pub fn cache(&self) -> Cache {
        Cache::new(self.cache_dir.clone())
    }
}

fn emit(report: &Report, config: &Config) -> Result<(), CliError> {
    let body = match config.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
        Format::Csv => report.csv_string(),
        Format::Text => report.text.clone(),
    };
    match &config.out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Io { path: path.clone(), source: e }),
        None => {
            std::io::stdout().write_all(body.as_bytes()).ok();
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if let Some(j) = cli.config.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let c = &cli.config;
    match &cli.command {
        Command::Pieri => commands::pieri(c),
        Command::Verify { target } => match target {
            Target::HeckeIdeals => commands::hecke_ideals(c),
            Target::MainTheorem => commands::main_theorem(c),
            Target::Determinantal => commands::determinantal(c),
            Target::Cauchy => commands::cauchy(c),
            Target::PhiPsi => commands::phi_psi(c),
            Target::PropDim => commands::prop_dim(c),
        },
        Command::Dump { table } => match table {
            Table::Isotypic => commands::isotypic(c),
            Table::QExpansion => commands::q_expansion(c),
            Table::Dims => commands::dims(c),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&r, &cli.config).map(|_| r.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("queerlab: {e}");
            ExitCode::from(2)
        }
    }
}
