//! `aoi` — command-line front end for the age-of-information toolkit.
//!
//! Exit status: 0 on success (including `--help`/`--version`), 1 on any
//! input error, 2 when `validate` completes but a check fails.

mod args;
mod commands;
mod report;

use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(status) => status,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}
