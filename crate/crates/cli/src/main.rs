use std::process::ExitCode;

use clap::Parser;
use platecert_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(status) => ExitCode::from(status.code()),
        Err(err) => {
            eprintln!("platecert: {err}");
            ExitCode::from(err.status().code())
        }
    }
}
