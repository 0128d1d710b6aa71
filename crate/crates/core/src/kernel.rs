//! Closed-form Dirichlet and conjugate Dirichlet kernels.
//!
//! Both kernels have a removable singularity wherever `sin(x/2)` vanishes.
//! Close to those points the closed forms cancel catastrophically, so the
//! evaluators fall back to the defining trigonometric sums.

use std::f64::consts::PI;

/// Below this value of `|sin(x/2)|` the kernels are summed term by term.
pub const SINGULAR_CUTOFF: f64 = 1e-8;

/// Reduces `x` to `[-π, π)`.
pub(crate) fn wrap_to_pi(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// `D_n(x) = 1/2 + Σ_{ν=1}^{n} cos(νx) = sin((n+½)x) / (2 sin(x/2))`.
pub fn dirichlet(n: usize, x: f64) -> f64 {
    let x = wrap_to_pi(x);
    let half = 0.5 * x;
    let s = half.sin();
    if s.abs() < SINGULAR_CUTOFF {
        return dirichlet_series(n, x);
    }
    ((n as f64 + 0.5) * x).sin() / (2.0 * s)
}

/// `D̃_n(x) = Σ_{ν=1}^{n} sin(νx) = (cos(x/2) − cos((n+½)x)) / (2 sin(x/2))`.
pub fn conjugate_dirichlet(n: usize, x: f64) -> f64 {
    let x = wrap_to_pi(x);
    let half = 0.5 * x;
    let s = half.sin();
    if s.abs() < SINGULAR_CUTOFF {
        return conjugate_dirichlet_series(n, x);
    }
    (half.cos() - ((n as f64 + 0.5) * x).cos()) / (2.0 * s)
}

fn dirichlet_series(n: usize, x: f64) -> f64 {
    0.5 + (1..=n).map(|nu| (nu as f64 * x).cos()).sum::<f64>()
}

fn conjugate_dirichlet_series(n: usize, x: f64) -> f64 {
    (1..=n).map(|nu| (nu as f64 * x).sin()).sum()
}
