use std::process::ExitCode;

use clap::Parser;
use nsc_bench::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(nsc_bench::cli::exit_code_for(&e))
        }
    }
}
