//! Reporting helpers for the acceptance suite.

use std::time::Duration;

/// One measured quantity with its pass condition.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub passed: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, passed: bool) -> Self {
        Self {
            label: label.into(),
            passed,
        }
    }

    /// `|measured − target| ≤ tol`.
    pub fn within(label: &str, measured: f64, target: f64, tol: f64) -> Self {
        Self::new(
            format!("{label} = {measured:.6} (target {target} ± {tol})"),
            (measured - target).abs() <= tol,
        )
    }

    /// `measured ≤ bound`.
    pub fn at_most(label: &str, measured: f64, bound: f64) -> Self {
        Self::new(
            format!("{label} = {measured:.3e} (≤ {bound:e})"),
            measured <= bound,
        )
    }

    pub fn runtime(elapsed: Duration, budget: Duration) -> Self {
        Self::new(
            format!(
                "runtime {:.2}s (< {}s)",
                elapsed.as_secs_f64(),
                budget.as_secs_f64()
            ),
            elapsed < budget,
        )
    }
}

/// Prints one `[PASS]`/`[FAIL]` line for the criterion followed by its
/// individual checks, and returns whether every check passed.
pub fn report(id: u32, title: &str, checks: &[Check]) -> bool {
    let ok = checks.iter().all(|c| c.passed);
    println!(
        "[{}] criterion {id}: {title}",
        if ok { "PASS" } else { "FAIL" }
    );
    for c in checks {
        println!("    {} {}", if c.passed { "ok  " } else { "FAIL" }, c.label);
    }
    ok
}
