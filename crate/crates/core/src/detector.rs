//! Jump detection from the coefficient-weighted conjugate functional
//!
//! ```text
//! Y_n(x) = −1/(log n · G(n)) · Σ_{k=1}^{n} S̃_k(x) |c_k|
//! ```
//!
//! At a jump of size `J` the field tends to `K·J/(2π)` for a constant `K`,
//! and it tends to zero away from jumps. Convergence is logarithmic in `n`.
//!
//! The leading minus sign is part of the definition. With the coefficient
//! convention `c_ν = (1/2π)∫ f e^{−iνx}`, `S̃_n` diverges like `−(J/π) log n`
//! at a jump, so the minus sign makes `Y_n` carry the sign of `J`.
//!
//! Swapping the order of summation gives
//! `Σ_k S̃_k |c_k| = Σ_ν t_ν(x) W_ν` with `W_ν = Σ_{k=ν}^{n} |c_k|`, so `Y_n`
//! is itself a trigonometric polynomial of degree `n`. Every evaluation path
//! below uses that form.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::coeffs::{coefficients_analytic, CoefficientSet};
use crate::error::{Error, Result};
use crate::grid::{eval_on_grid, grid_point, Execution, Strategy};
use crate::series::{conjugate_partial_sum, conjugate_term, IMAG_RESIDUE_TOL};
use crate::signal::{reference_pulse, total_variation};

/// Minimum number of grid points per unit of order.
pub const GRID_OVERSAMPLING: usize = 16;

/// Default relative threshold for peak picking.
pub const DEFAULT_THRESHOLD: f64 = 0.25;

/// A field whose maximum magnitude falls below this holds no jumps.
pub const EMPTY_FIELD_TOL: f64 = 1e-10;

/// `W_ν = Σ_{k=ν}^{n} |c_k|` for `ν = 1..=n` (index 0 unused) and `G(n)`.
fn tail_weights(coeffs: &CoefficientSet, n: usize) -> (Vec<f64>, f64) {
    let mags: Vec<f64> = coeffs.non_negative()[..=n]
        .iter()
        .map(|c| c.norm())
        .collect();
    let mut w = vec![0.0; n + 1];
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc += mags[k];
        w[k] = acc;
    }
    let g = mags[0] + acc;
    (w, g)
}

fn check_order(coeffs: &CoefficientSet, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    coeffs.check_order(n)
}

/// `log n · G(n)`; zero only for the zero signal.
pub fn normalizer(coeffs: &CoefficientSet, n: usize) -> Result<f64> {
    check_order(coeffs, n)?;
    Ok((n as f64).ln() * tail_weights(coeffs, n).1)
}

/// `Y_n(x)`. Returns 0 when `G(n) = 0`.
pub fn y_n(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<f64> {
    check_order(coeffs, n)?;
    let (w, g) = tail_weights(coeffs, n);
    if g == 0.0 {
        return Ok(0.0);
    }
    let sum: Complex64 = (1..=n)
        .map(|k| conjugate_term(coeffs, k as i64, Complex64::from_polar(1.0, k as f64 * x)) * w[k])
        .sum();
    if coeffs.is_hermitian() && sum.im.abs() > IMAG_RESIDUE_TOL * (1.0 + sum.re.abs()) {
        return Err(Error::ImaginaryResidue(sum.im));
    }
    Ok(-sum.re / ((n as f64).ln() * g))
}

/// Series coefficients `b_ν` of `Y_n`, ordered `ν = −n..=n`.
fn field_coefficients(coeffs: &CoefficientSet, n: usize) -> (Vec<Complex64>, f64) {
    let (w, g) = tail_weights(coeffs, n);
    let norm = (n as f64).ln() * g;
    let mut b = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    if g == 0.0 {
        return (b, norm);
    }
    let scale = -1.0 / norm;
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 1..=n {
        let f = w[k] * scale;
        b[n + k] = minus_i * coeffs.get(k as i64) * f;
        b[n - k] = -minus_i * coeffs.get(-(k as i64)) * f;
    }
    (b, norm)
}

/// Samples of `Y_n` on the uniform grid `x_i = 2πi/grid_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct YnField {
    pub n: usize,
    pub values: Vec<f64>,
    /// `log n · G(n)`.
    pub normalizer: f64,
}

impl YnField {
    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn x(&self, i: usize) -> f64 {
        grid_point(i, self.values.len())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values at grid points strictly inside `(a, b)`.
    pub fn restrict(&self, a: f64, b: f64) -> &[f64] {
        let m = self.values.len();
        let h = TAU / m as f64;
        let mut lo = ((a / h).floor().max(0.0) as usize).min(m);
        while lo > 0 && grid_point(lo - 1, m) > a {
            lo -= 1;
        }
        while lo < m && grid_point(lo, m) <= a {
            lo += 1;
        }
        let mut hi = lo;
        while hi < m && grid_point(hi, m) < b {
            hi += 1;
        }
        &self.values[lo..hi]
    }

    /// Field translated by an integer number of grid steps.
    pub fn rotated(&self, steps: usize) -> Vec<f64> {
        let mut v = self.values.clone();
        v.rotate_right(steps % self.values.len());
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FieldOptions {
    pub strategy: Strategy,
    pub execution: Execution,
}

pub fn y_n_field(coeffs: &CoefficientSet, n: usize, grid_size: usize) -> Result<YnField> {
    y_n_field_with(coeffs, n, grid_size, FieldOptions::default())
}

/// `Y_n` on a grid of at least `16n` points.
pub fn y_n_field_with(
    coeffs: &CoefficientSet,
    n: usize,
    grid_size: usize,
    opts: FieldOptions,
) -> Result<YnField> {
    check_order(coeffs, n)?;
    let needed = GRID_OVERSAMPLING * n;
    if grid_size < needed {
        return Err(Error::GridTooCoarse {
            grid: grid_size,
            order: n,
            needed,
        });
    }
    let (b, norm) = field_coefficients(coeffs, n);
    let raw = eval_on_grid(&b, grid_size, opts.strategy, opts.execution);
    let mut values = Vec::with_capacity(grid_size);
    for z in raw {
        if coeffs.is_hermitian() && z.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::ImaginaryResidue(z.im));
        }
        values.push(z.re);
    }
    Ok(YnField {
        n,
        values,
        normalizer: norm,
    })
}

/// Default grid for order `n`: the smallest power of two holding `16n` points.
pub fn default_grid(n: usize) -> usize {
    (GRID_OVERSAMPLING * n).next_power_of_two()
}

/// Direct magnitude estimate `−π S̃_n(x) / log n`, which tends to `J(x)`.
pub fn lukacs_jump_estimate(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(-PI * conjugate_partial_sum(coeffs, n, x)? / (n as f64).ln())
}

/// Empirical value of the constant relating `Y_n` at a jump to `J/(2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub k: f64,
    pub n: usize,
    pub reference: String,
}

impl CalibrationResult {
    /// Jump magnitude implied by a field value: `2π·Y / K`.
    pub fn magnitude(&self, y: f64) -> f64 {
        TAU * y / self.k
    }
}

const REFERENCE_JUMP: f64 = TAU / 3.0;

/// `K̂ = 2π · Y_n(2π/3)` on the unit pulse over `(2π/3, 4π/3)`.
pub fn calibrate_k(n: usize) -> Result<CalibrationResult> {
    let spec = reference_pulse();
    let coeffs = coefficients_analytic(&spec, n);
    let k = TAU * y_n(&coeffs, n, REFERENCE_JUMP)?;
    Ok(CalibrationResult {
        k,
        n,
        reference: spec.name().to_string(),
    })
}

/// Constant relating interval variation to `(1/π) Σ|J|`, measured on the
/// reference pulse over `(π/3, π)`, which holds only its `+1` jump.
pub fn calibrate_variation_k(n: usize) -> Result<CalibrationResult> {
    let spec = reference_pulse();
    let coeffs = coefficients_analytic(&spec, n);
    let density = (4 * GRID_OVERSAMPLING * n).next_power_of_two();
    let v = interval_variation(&coeffs, n, PI / 3.0, PI, density)?;
    Ok(CalibrationResult {
        k: PI * v.value,
        n,
        reference: spec.name().to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// `−π S̃_n(x̂) / log n`.
    Lukacs,
    /// `2π Y_n(x̂) / K`.
    YnCalibrated,
}

impl Estimator {
    pub fn tag(self) -> &'static str {
        match self {
            Estimator::Lukacs => "lukacs",
            Estimator::YnCalibrated => "yn-calibrated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedJump {
    pub location: f64,
    pub magnitude: f64,
    /// `|Y_n|` at the peak relative to the field maximum.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpReport {
    pub entries: Vec<DetectedJump>,
    pub estimator: Estimator,
    pub n: usize,
    pub k_used: f64,
    pub normalizer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    pub threshold_ratio: f64,
    /// Defaults to [`default_grid`].
    pub grid_size: Option<usize>,
    pub estimator: Estimator,
    pub field: FieldOptions,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            threshold_ratio: DEFAULT_THRESHOLD,
            grid_size: None,
            estimator: Estimator::YnCalibrated,
            field: FieldOptions::default(),
        }
    }
}

pub fn detect_jumps(
    coeffs: &CoefficientSet,
    n: usize,
    threshold_ratio: f64,
    calibration: &CalibrationResult,
) -> Result<JumpReport> {
    let opts = DetectOptions {
        threshold_ratio,
        ..Default::default()
    };
    detect_jumps_with(coeffs, n, &opts, calibration)
}

/// Peaks of `|values|` (cyclic) above `threshold_ratio · max`, as
/// `(grid index, sub-grid offset in steps, relative score)`.
pub(crate) fn pick_peaks(values: &[f64], threshold_ratio: f64) -> Vec<(usize, f64, f64)> {
    let m = values.len();
    let max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max < EMPTY_FIELD_TOL || m < 3 {
        return Vec::new();
    }
    let cutoff = threshold_ratio * max;
    (0..m)
        .filter_map(|i| {
            let prev = values[(i + m - 1) % m].abs();
            let here = values[i].abs();
            let next = values[(i + 1) % m].abs();
            if here < cutoff || here < prev || here <= next {
                return None;
            }
            let curvature = prev - 2.0 * here + next;
            let offset = if curvature < 0.0 {
                (0.5 * (prev - next) / curvature).clamp(-0.5, 0.5)
            } else {
                0.0
            };
            Some((i, offset, here / max))
        })
        .collect()
}

/// Local maxima of `|Y_n|` become jumps; locations are refined with a
/// three-point parabola and magnitudes come from the chosen estimator.
pub fn detect_jumps_with(
    coeffs: &CoefficientSet,
    n: usize,
    opts: &DetectOptions,
    calibration: &CalibrationResult,
) -> Result<JumpReport> {
    if !(opts.threshold_ratio > 0.0 && opts.threshold_ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold ratio {} outside (0, 1)",
            opts.threshold_ratio
        )));
    }
    let m = opts.grid_size.unwrap_or_else(|| default_grid(n));
    let field = y_n_field_with(coeffs, n, m, opts.field)?;
    let h = TAU / m as f64;
    let mut entries = pick_peaks(&field.values, opts.threshold_ratio)
        .into_iter()
        .map(|(i, offset, score)| {
            let location = ((i as f64 + offset) * h).rem_euclid(TAU);
            let magnitude = match opts.estimator {
                Estimator::YnCalibrated => calibration.magnitude(y_n(coeffs, n, location)?),
                Estimator::Lukacs => lukacs_jump_estimate(coeffs, n, location)?,
            };
            Ok(DetectedJump {
                location,
                magnitude,
                score,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(JumpReport {
        entries,
        estimator: opts.estimator,
        n,
        k_used: calibration.k,
        normalizer: field.normalizer,
    })
}

/// Discrete total variation of `Y_n` over an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationEstimate {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub value: f64,
    pub grid_density: usize,
    pub normalizer: f64,
}

impl VariationEstimate {
    /// `π V / K_var`, the implied `Σ|J|` inside the interval.
    pub fn jump_mass(&self, calibration: &CalibrationResult) -> f64 {
        PI * self.value / calibration.k
    }
}

/// Total variation of `Y_n` sampled at the points of the `grid_density`
/// uniform grid that fall strictly inside `(a, b)`.
pub fn interval_variation(
    coeffs: &CoefficientSet,
    n: usize,
    a: f64,
    b: f64,
    grid_density: usize,
) -> Result<VariationEstimate> {
    if !(a > 0.0 && a < b && b < TAU) {
        return Err(Error::InvalidInterval { a, b });
    }
    check_order(coeffs, n)?;
    let needed = GRID_OVERSAMPLING * n;
    let inside = ((b - a) / TAU * grid_density as f64).floor() as usize;
    if inside < needed || grid_density <= 2 * n {
        return Err(Error::GridTooCoarse {
            grid: inside,
            order: n,
            needed,
        });
    }
    let field = y_n_field_with(coeffs, n, grid_density.max(needed), FieldOptions::default())?;
    let value = total_variation(field.restrict(a, b))?;
    Ok(VariationEstimate {
        a,
        b,
        n,
        value,
        grid_density,
        normalizer: field.normalizer,
    })
}

/// Cyclic total variation of a sampled periodic field.
pub fn cyclic_variation(values: &[f64]) -> f64 {
    match values {
        [] | [_] => 0.0,
        _ => {
            let open: f64 = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
            open + (values[0] - values[values.len() - 1]).abs()
        }
    }
}
