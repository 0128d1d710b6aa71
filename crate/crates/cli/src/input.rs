//! Signal and sample loading.

use std::fs;
use std::path::Path;

use conjugate_jumps::signal::{builtin, parse_signal};
use conjugate_jumps::torus::{builtin_2d, parse_field_2d, SeparableField};
use conjugate_jumps::{
    coefficients_analytic, coefficients_from_samples, CoefficientSet, SignalSpec,
};

use crate::config::Source;
use crate::error::RunError;

/// Reads one real per line. Blank lines are skipped; anything else that is
/// not a number fails with its 1-based line number.
pub fn load_samples(path: &Path) -> Result<Vec<f64>, RunError> {
    let text = fs::read_to_string(path)
        .map_err(|e| RunError::input(format!("{}: {e}", path.display())))?;
    parse_samples(&text).map_err(|e| match e {
        RunError::Input(m) => RunError::input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_samples(text: &str) -> Result<Vec<f64>, RunError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => {
                return Err(RunError::input(format!(
                    "line {}: not a finite number: {t:?}",
                    i + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(RunError::input("no samples"));
    }
    Ok(out)
}

/// A built-in name wins over a file of the same name.
pub fn load_signal(name_or_path: &str) -> Result<SignalSpec, RunError> {
    if let Some(spec) = builtin(name_or_path) {
        return Ok(spec);
    }
    let text = fs::read_to_string(name_or_path).map_err(|e| {
        RunError::input(format!(
            "{name_or_path}: not a built-in signal and unreadable ({e})"
        ))
    })?;
    Ok(parse_signal(&text)?)
}

pub fn load_field(name_or_path: &str) -> Result<SeparableField, RunError> {
    if let Some(field) = builtin_2d(name_or_path) {
        return Ok(field);
    }
    let text = fs::read_to_string(name_or_path).map_err(|e| {
        RunError::input(format!(
            "{name_or_path}: not a built-in field and unreadable ({e})"
        ))
    })?;
    Ok(parse_field_2d(&text)?)
}

/// Coefficients up to `max_index` from either kind of source.
pub fn load_coefficients(source: &Source, max_index: usize) -> Result<CoefficientSet, RunError> {
    match source {
        Source::Signal(s) => Ok(coefficients_analytic(&load_signal(s)?, max_index)),
        Source::Samples(path) => Ok(coefficients_from_samples(&load_samples(path)?, max_index)?),
    }
}
