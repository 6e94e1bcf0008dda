//! Command-line front end: tables, certificates and curve data as CSV or
//! JSON.
//!
//! Exit status is 0 when every requested verification passes, 1 when one
//! fails, 2 for usage errors and 3 when a computation or the output itself
//! fails.

pub mod certificate;
mod commands;
pub mod config;
pub mod output;

use std::fmt;
use std::io;

pub use certificate::Certificate;
pub use commands::run;
pub use config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    VerificationFailed,
    Usage,
    Numerical,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::VerificationFailed => 1,
            ExitStatus::Usage => 2,
            ExitStatus::Numerical => 3,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(platecert::Error),
    Io(io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            _ => ExitStatus::Numerical,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "output: {e}"),
            CliError::Csv(e) => write!(f, "csv: {e}"),
            CliError::Json(e) => write!(f, "json: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<platecert::Error> for CliError {
    fn from(e: platecert::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}
