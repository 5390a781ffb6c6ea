//! Command-line front end for the dwell-time certificate library.
//!
//! The binary exposes five subcommands (`analyze`, `simulate`, `decompose`,
//! `reproduce-example`, `enumerate`) over [`dwellcert_core`]. Everything here
//! is I/O and presentation; the mathematics lives in the core crate.

use clap::Parser;
use thiserror::Error;

pub mod commands;
pub mod family;
pub mod report;
pub mod svg;

pub use commands::{dispatch, Cli, EXIT_FAIL, EXIT_PASS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("family file {path}: {message}")]
    Family { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("writing {path}: {message}")]
    Output { path: String, message: String },
    #[error(transparent)]
    Cert(#[from] dwellcert_core::certificate::CertError),
    #[error(transparent)]
    Word(#[from] dwellcert_core::word::WordError),
    #[error(transparent)]
    Sim(#[from] dwellcert_core::sim::SimError),
    #[error("serializing report: {0}")]
    Json(#[from] serde_json::Error),
}

/// Parses arguments and runs the selected subcommand, returning the process
/// exit code: 0 pass, 2 checked-and-failed, 1 usage or I/O error.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprint!("{err}");
                    1
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}
