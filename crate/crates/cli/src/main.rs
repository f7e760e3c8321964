//! `augucb` command-line harness.
//!
//! Exit codes: 0 on success, 1 on user error (bad flags, unknown
//! experiment, out-of-domain parameters, unwritable output directory),
//! 2 on internal error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "augucb", version, about = "Thresholding bandit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write error-percentage curves plus a manifest.
    Run(RunArgs),
    /// Print the complexity measures of a scenario as JSON.
    Complexity(ComplexityArgs),
    /// Print the theoretical bounds of a scenario as JSON.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// `t,error_pct` with a header row.
    Csv,
    /// Headerless `t error_pct` pairs.
    Plain,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub experiment: u32,
    #[arg(long, default_value_t = augucb::experiments::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = augucb::experiments::DEFAULT_ITERATIONS)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated roster labels or policy names; defaults to the
    /// scenario roster.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// Write every k-th time-step (plus the last one).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub subsample: u64,
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Regret-bound split point recorded in the manifest; defaults to sqrt(e/T).
    #[arg(long)]
    pub b: Option<f64>,
    /// AugUCB elimination parameter.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub rho: f64,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub experiment: u32,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub experiment: u32,
    #[arg(long, default_value_t = augucb::experiments::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub rho: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => commands::run(&args),
        Command::Complexity(args) => commands::complexity(&args),
        Command::Bounds(args) => commands::bounds(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
