use std::process::ExitCode;

use clap::Parser;
use subcover::harness::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("subcover: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
