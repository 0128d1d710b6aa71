//! Batch runner behind the `cjumps` binary.
//!
//! A [`RunConfig`] is built from command-line flags, validated up front, and
//! executed by [`run`] into a [`Report`] of rows that serialize to CSV or
//! JSON lines with fixed column order. Identical inputs give byte-identical
//! output.

pub mod config;
pub mod error;
pub mod input;
pub mod run;

pub use config::{Cli, Command, Format, RunConfig, Source};
pub use error::RunError;
pub use input::load_samples;
pub use run::{run, Report};

use std::fs::File;
use std::io::{self, BufWriter};

/// Runs `cfg` and writes its report to `cfg.out` or stdout.
pub fn execute(cfg: &RunConfig) -> Result<Report, RunError> {
    let report = run(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| RunError::input(format!("{}: {e}", path.display())))?;
            report.write(cfg.format, BufWriter::new(file))?;
        }
        None => report.write(cfg.format, io::stdout().lock())?,
    }
    Ok(report)
}
