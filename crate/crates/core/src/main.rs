use std::process::ExitCode;

use clap::Parser;
use divquad::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
