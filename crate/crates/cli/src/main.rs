//! `zscan`: enumerate conic-line arrangements, explain and filter classes,
//! realize them numerically and compare realizations.
//!
//! Exit codes: 0 success or equivalent, 2 I/O failure, 3 invalid
//! configuration, 4 unknown key, 5 invalid input file, 10 realization
//! unknown, 11 combinatorially but not provably projectively equivalent,
//! 12 combinatorially inequivalent.

mod catalog;
mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::error::CliError;
use crate::output::{Context, Format};

#[derive(Debug, Parser)]
#[command(name = "zscan", version, about = "Classify (n,1) conic-line arrangements")]
struct Cli {
    /// Output directory
    #[arg(long, env = "ZSCAN_OUT", default_value = "zscan-out", global = true)]
    out: PathBuf,

    /// Seed for randomized searches, recorded in every output header
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Reuse valid catalog files already in the output directory
    #[arg(long, global = true)]
    resume: bool,

    /// Format of what is printed on standard output
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: commands::Commands,
}

fn configure_workers(workers: Option<usize>) -> Result<(), CliError> {
    let Some(workers) = workers else {
        return Ok(());
    };
    if workers == 0 {
        return Err(CliError::Config("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context { out: cli.out, seed: cli.seed, resume: cli.resume, format: cli.format };
    let result = configure_workers(cli.workers).and_then(|()| commands::run(&ctx, &cli.command));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("zscan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
