use std::process::ExitCode;

use chebsys::cli::{init_logging, run, Args};
use clap::Parser;

fn main() -> ExitCode {
    init_logging();
    ExitCode::from(run(&Args::parse()))
}
