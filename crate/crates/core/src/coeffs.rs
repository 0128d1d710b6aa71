//! One-dimensional Fourier coefficient sets.
//!
//! Convention throughout the crate: `c_ν = (1/2π) ∫₀^{2π} f(x) e^{−iνx} dx`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::SignalSpec;

/// Coefficients `c_ν` for every `ν ∈ [−N, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    max_index: usize,
    values: Vec<Complex64>,
    hermitian: bool,
}

const HERMITIAN_TOL: f64 = 1e-12;

impl CoefficientSet {
    /// Builds a set from values ordered `ν = −N, …, N`.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "coefficient vector has even length {}",
                values.len()
            )));
        }
        let max_index = values.len() / 2;
        let scale = values.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let hermitian = (1..=max_index).all(|k| {
            (values[max_index - k] - values[max_index + k].conj()).norm() <= HERMITIAN_TOL * scale
        }) && values[max_index].im.abs() <= HERMITIAN_TOL * scale;
        Ok(Self {
            max_index,
            values,
            hermitian,
        })
    }

    /// Builds a set by evaluating `f(ν)` for `ν ∈ [−N, N]`.
    pub fn from_fn(max_index: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let n = max_index as i64;
        Self::from_values((-n..=n).map(f).collect()).expect("odd length")
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Whether `c_{−ν} = conj(c_ν)`, i.e. the set describes a real signal.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `c_ν`; panics if `|ν| > N`.
    pub fn get(&self, nu: i64) -> Complex64 {
        self.values[(nu + self.max_index as i64) as usize]
    }

    /// Coefficients with `ν ≥ 0`, i.e. `c_0, …, c_N`.
    pub fn non_negative(&self) -> &[Complex64] {
        &self.values[self.max_index..]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn check_order(&self, n: usize) -> Result<()> {
        if n > self.max_index {
            return Err(Error::OutOfRange {
                order: n,
                max_index: self.max_index,
            });
        }
        Ok(())
    }

    /// Coefficients of `λ·f`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            max_index: self.max_index,
            values: self.values.iter().map(|c| c * factor).collect(),
            hermitian: self.hermitian,
        }
    }

    /// Coefficients of `f(x − δ)`: `c_ν e^{−iνδ}`.
    pub fn translated(&self, delta: f64) -> Self {
        let n = self.max_index as i64;
        Self {
            max_index: self.max_index,
            values: self
                .values
                .iter()
                .zip(-n..=n)
                .map(|(c, nu)| c * Complex64::from_polar(1.0, -(nu as f64) * delta))
                .collect(),
            hermitian: self.hermitian,
        }
    }

    /// Truncation to `|ν| ≤ n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.check_order(n)?;
        let lo = self.max_index - n;
        Ok(Self {
            max_index: n,
            values: self.values[lo..=self.max_index + n].to_vec(),
            hermitian: self.hermitian,
        })
    }
}

/// Exact coefficients of a piecewise-polynomial signal.
///
/// Each piece is integrated against `e^{−iνx}` through the closed-form
/// antiderivative `e^{ax} Σ_j (−1)^j p^{(j)}(x) / a^{j+1}` with `a = −iν`.
pub fn coefficients_analytic(spec: &SignalSpec, max_index: usize) -> CoefficientSet {
    let derivs: Vec<Vec<_>> = spec
        .pieces()
        .iter()
        .map(|p| {
            let mut ds = vec![p.poly.clone()];
            while !ds.last().unwrap().is_zero() {
                let d = ds.last().unwrap().derivative();
                ds.push(d);
            }
            ds.pop();
            ds
        })
        .collect();

    let zeroth: f64 = spec
        .pieces()
        .iter()
        .map(|p| {
            let anti = p.poly.antiderivative();
            anti.eval(p.end) - anti.eval(p.start)
        })
        .sum::<f64>()
        / TAU;

    let mut set = CoefficientSet::from_fn(max_index, |nu| {
        if nu == 0 {
            return Complex64::new(zeroth, 0.0);
        }
        let a = Complex64::new(0.0, -(nu as f64));
        let inv_a = a.inv();
        let mut total = Complex64::new(0.0, 0.0);
        for (piece, ds) in spec.pieces().iter().zip(&derivs) {
            let anti = |x: f64| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut pow = inv_a;
                let mut sign = 1.0;
                for d in ds {
                    acc += pow * (sign * d.eval(x));
                    pow *= inv_a;
                    sign = -sign;
                }
                acc * phase(nu, x)
            };
            total += anti(piece.end) - anti(piece.start);
        }
        total / TAU
    });
    // the signal is real, so the set is hermitian up to rounding
    set.hermitian = true;
    set
}

/// `e^{−iνx}`, exact at the period endpoints.
fn phase(nu: i64, x: f64) -> Complex64 {
    if x == 0.0 || x == TAU {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, -(nu as f64) * x)
    }
}

/// Coefficients estimated from `M` uniform samples at `x_m = 2πm/M`.
///
/// `c_ν ≈ (1/M) Σ_m f(x_m) e^{−iνx_m}`. For signals with jumps the error
/// is `O(1/M)`.
pub fn coefficients_from_samples(samples: &[f64], max_index: usize) -> Result<CoefficientSet> {
    let m = samples.len();
    let needed = 2 * max_index + 1;
    if m < needed {
        return Err(Error::Aliasing {
            samples: m,
            max_index,
            needed,
        });
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut set = CoefficientSet::from_fn(max_index, |nu| {
        buf[nu.rem_euclid(m as i64) as usize] * scale
    });
    set.hermitian = true;
    Ok(set)
}

/// Samples `spec` on the uniform grid `x_m = 2πm/M`.
pub fn sample_signal(spec: &SignalSpec, m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| spec.evaluate(TAU * i as f64 / m as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{make_constant, make_ramp, make_staircase, reference_pulse};
    use std::f64::consts::PI;

    #[test]
    fn pulse_mean_and_first_harmonic() {
        let c = coefficients_analytic(&reference_pulse(), 4);
        assert!((c.get(0).re - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.get(1).norm() - (PI / 3.0).sin() / PI).abs() < 1e-14);
        assert!(c.is_hermitian());
    }

    #[test]
    fn constant_is_orthogonal() {
        let c = coefficients_analytic(&make_constant(3.0), 8);
        assert_eq!(c.get(0), Complex64::new(3.0, 0.0));
        for nu in 1..=8 {
            assert!(c.get(nu).norm() < 1e-15 && c.get(-nu).norm() < 1e-15);
        }
    }

    #[test]
    fn staircase_mean() {
        let c = coefficients_analytic(&make_staircase(), 0);
        assert!((c.get(0).re - 1.2).abs() < 1e-14);
    }

    #[test]
    fn analytic_sets_are_conjugate_symmetric() {
        let c = coefficients_analytic(&make_ramp(), 64);
        for nu in 1..=64 {
            assert!((c.get(-nu) - c.get(nu).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn samples_of_cosine() {
        let s: Vec<f64> = (0..64).map(|m| (TAU * m as f64 / 64.0).cos()).collect();
        let c = coefficients_from_samples(&s, 2).unwrap();
        assert!((c.get(1).re - 0.5).abs() < 1e-12 && (c.get(-1).re - 0.5).abs() < 1e-12);
        for nu in [-2, 0, 2] {
            assert!(c.get(nu).norm() <= 1e-12);
        }
    }

    #[test]
    fn constant_samples() {
        let c = coefficients_from_samples(&[2.0], 0).unwrap();
        assert!((c.get(0).re - 2.0).abs() < 1e-15);
        let c = coefficients_from_samples(&[2.0; 7], 0).unwrap();
        assert!((c.get(0).re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn aliasing_is_rejected() {
        let err = coefficients_from_samples(&[0.0; 8], 4).unwrap_err();
        assert!(matches!(err, Error::Aliasing { needed: 9, .. }));
    }

    #[test]
    fn translation_and_truncation() {
        let c = coefficients_analytic(&reference_pulse(), 16);
        let t = c.translated(0.3);
        assert!((t.get(3).norm() - c.get(3).norm()).abs() < 1e-15);
        let tr = c.truncated(4).unwrap();
        assert_eq!(tr.get(-4), c.get(-4));
        assert!(c.truncated(17).is_err());
    }
}
