use std::process::ExitCode;

use clap::Parser;
use gbsp_cli::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("gbsp: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
