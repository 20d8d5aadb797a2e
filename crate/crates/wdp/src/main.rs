use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wdp::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = cli::run(&args);
    let _ = std::io::stdout().write_all(outcome.output.as_bytes());
    let _ = std::io::stderr().write_all(outcome.error.as_bytes());
    ExitCode::from(outcome.code)
}
