//! `eatsim`: similarity, robustness, and reduction analysis of multiplex
//! networks from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 numeric failure.

mod cli;
mod commands;
mod config;
mod output;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(e) => {
            // Help and version requests arrive as "errors" but exit cleanly.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(parsed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                eatsim::Error::Numeric(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
