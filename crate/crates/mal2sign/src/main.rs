use std::process::ExitCode;

use clap::Parser;
use mal2sign::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
