//! Command-line front-end: runs sweeps and writes CSV plus a JSON manifest.

mod commands;
mod output;
mod range;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::channel::ChannelArgs;
use commands::dynamics::{DynamicsArgs, TbreDynamicsArgs};
use commands::ensemble::{GoeArgs, MblArgs, TbreArgs};
use commands::fit::FitArgs;

const THREADS_ENV: &str = "ENTROCOMPLEX_THREADS";

#[derive(Debug, Parser)]
#[command(name = "entrocomplex", version, about = "Entropic complexity sweeps")]
#[command(after_help = "Grids accept `start:stop:step` (both ends included when step divides the span), \
`geom:start:stop:count`, `lin:start:stop:count`, or a comma list.")]
struct Cli {
    /// Worker threads. Falls back to $ENTROCOMPLEX_THREADS, then to all cores.
    /// Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Channel(ChannelArgs),
    RmtGoe(GoeArgs),
    RmtTbre(TbreArgs),
    Mbl(MblArgs),
    Dynamics(DynamicsArgs),
    TbreDynamics(TbreDynamicsArgs),
    Fit(FitArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] entrocomplex::Error),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            _ => 1,
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match (flag, std::env::var(THREADS_ENV)) {
        (Some(n), _) => n,
        (None, Ok(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{s}`")))?,
        (None, Err(_)) => return Ok(None),
    };
    if n == 0 {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    Ok(Some(n))
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Channel(a) => commands::channel::run(a),
        Command::RmtGoe(a) => commands::ensemble::run_goe(a),
        Command::RmtTbre(a) => commands::ensemble::run_tbre(a),
        Command::Mbl(a) => commands::ensemble::run_mbl(a),
        Command::Dynamics(a) => commands::dynamics::run_dynamics(a),
        Command::TbreDynamics(a) => commands::dynamics::run_tbre_dynamics(a),
        Command::Fit(a) => commands::fit::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
