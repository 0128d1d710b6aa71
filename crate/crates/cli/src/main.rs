use std::process::ExitCode;

use cjumps::{execute, Cli, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|cfg| execute(&cfg).map(|_| ()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cjumps: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
