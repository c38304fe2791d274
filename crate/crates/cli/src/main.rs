use std::process::ExitCode;

use clap::Parser;
use rowq_cli::args::Cli;

fn main() -> ExitCode {
    match rowq_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("rowq: {err}");
            err.into()
        }
    }
}
