mod cli;
mod commands;
mod config;
mod error;
mod output;
mod svg;
mod validate;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Context;
use crate::error::CliError;

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "CASIMIR_WORKERS";

fn configure_workers() -> Result<(), CliError> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn run(args: Vec<OsString>) -> Result<(), CliError> {
    let args = config::merge_config_file(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            let _ = e.print();
            return if e.use_stderr() {
                Err(CliError::Usage(String::new()))
            } else {
                Ok(())
            };
        }
    };
    configure_workers()?;
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::SpectralDiag(a) => commands::spectral_diag(&ctx, a),
        Command::SpectralMap(a) => commands::spectral_map(&ctx, a),
        Command::SpectralSlice(a) => commands::spectral_slice(&ctx, a),
        Command::Figure(a) => commands::figure(&ctx, a),
        Command::Twopoint(a) => commands::twopoint(&ctx, a),
        Command::Bhd(a) => commands::bhd(&ctx, a),
        Command::Validate(a) => validate::run(&ctx, a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string();
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
