//! Evaluation of trigonometric polynomials on uniform grids.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

/// How direct (non-FFT) grid evaluation is scheduled.
///
/// Both modes compute every grid point with the same arithmetic, so their
/// results are bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Grid evaluation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// FFT when the grid size is a power of two, direct summation otherwise.
    #[default]
    Auto,
    /// Always sum term by term.
    Direct,
}

/// Uniform grid point `2πi/m`.
pub fn grid_point(i: usize, m: usize) -> f64 {
    TAU * i as f64 / m as f64
}

/// Rotations are resynchronised with an exact `from_polar` this often.
const RESYNC: usize = 32;

/// `Σ_{ν=−n}^{n} b_ν e^{iνx}` at a single point, with `b` indexed `ν + n`.
pub fn eval_point(b: &[Complex64], x: f64) -> Complex64 {
    let n = b.len() / 2;
    let mut acc = b[n];
    let step = Complex64::from_polar(1.0, x);
    let mut rot = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        rot = if k % RESYNC == 0 {
            Complex64::from_polar(1.0, k as f64 * x)
        } else {
            rot * step
        };
        acc += b[n + k] * rot + b[n - k] * rot.conj();
    }
    acc
}

/// Evaluates `Σ_{ν=−n}^{n} b_ν e^{iνx}` at `x_i = 2πi/m` for `i < m`.
///
/// Requires `m ≥ 2n + 1`.
pub fn eval_on_grid(
    b: &[Complex64],
    m: usize,
    strategy: Strategy,
    exec: Execution,
) -> Vec<Complex64> {
    let n = b.len() / 2;
    assert!(m > 2 * n, "grid of {m} points aliases degree {n}");
    if strategy == Strategy::Auto && m.is_power_of_two() {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, &v) in b.iter().enumerate() {
            let nu = k as i64 - n as i64;
            buf[nu.rem_euclid(m as i64) as usize] += v;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        return buf;
    }
    let point = |i: usize| eval_point(b, grid_point(i, m));
    match exec {
        Execution::Sequential => (0..m).map(point).collect(),
        Execution::Parallel => (0..m).into_par_iter().map(point).collect(),
    }
}
