//! Partial sums of the Fourier series and of the conjugate series.

use num_complex::Complex64;

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};

/// Largest imaginary part tolerated when summing a real-signal set.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

fn checked_real(coeffs: &CoefficientSet, z: Complex64) -> Result<f64> {
    if coeffs.is_hermitian() && z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `S_n(x) = Σ_{|ν|≤n} c_ν e^{iνx}` as a complex number.
pub fn partial_sum_complex(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<Complex64> {
    coeffs.check_order(n)?;
    let mut acc = coeffs.get(0);
    for k in 1..=n as i64 {
        let e = Complex64::from_polar(1.0, k as f64 * x);
        acc += coeffs.get(k) * e + coeffs.get(-k) * e.conj();
    }
    Ok(acc)
}

/// Real part of `S_n(x)`.
pub fn partial_sum(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<f64> {
    let z = partial_sum_complex(coeffs, n, x)?;
    checked_real(coeffs, z)
}

/// The `ν`-th term pair of the conjugate series,
/// `−i (c_ν e^{iνx} − c_{−ν} e^{−iνx})`, for `ν ≥ 1`.
#[inline]
pub(crate) fn conjugate_term(coeffs: &CoefficientSet, nu: i64, e: Complex64) -> Complex64 {
    let d = coeffs.get(nu) * e - coeffs.get(-nu) * e.conj();
    Complex64::new(d.im, -d.re)
}

/// `S̃_n(x) = −i Σ_{|ν|≤n} sign(ν) c_ν e^{iνx}` as a complex number.
///
/// `sign(0) = 0`, so `c_0` never contributes.
pub fn conjugate_partial_sum_complex(
    coeffs: &CoefficientSet,
    n: usize,
    x: f64,
) -> Result<Complex64> {
    coeffs.check_order(n)?;
    Ok((1..=n as i64)
        .map(|k| conjugate_term(coeffs, k, Complex64::from_polar(1.0, k as f64 * x)))
        .sum())
}

/// Real part of `S̃_n(x)`.
pub fn conjugate_partial_sum(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<f64> {
    let z = conjugate_partial_sum_complex(coeffs, n, x)?;
    checked_real(coeffs, z)
}

/// `S̃_1(x), …, S̃_n(x)` in one pass.
pub fn conjugate_partial_sums_upto(coeffs: &CoefficientSet, n: usize, x: f64) -> Result<Vec<f64>> {
    coeffs.check_order(n)?;
    let mut acc = Complex64::new(0.0, 0.0);
    (1..=n as i64)
        .map(|k| {
            acc += conjugate_term(coeffs, k, Complex64::from_polar(1.0, k as f64 * x));
            checked_real(coeffs, acc)
        })
        .collect()
}

/// `G(n) = Σ_{i=0}^{n} |c_i|` over non-negative indices only.
pub fn coefficient_mass(coeffs: &CoefficientSet, n: usize) -> Result<f64> {
    coeffs.check_order(n)?;
    Ok(coeffs.non_negative()[..=n].iter().map(|c| c.norm()).sum())
}
