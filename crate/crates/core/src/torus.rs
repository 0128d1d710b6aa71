//! Directional conjugate series on the two-dimensional torus.
//!
//! For a direction `j` the conjugate multiplier is `sign(ν_j)` (zero when
//! `ν_j = 0`), partial sums run over the square `max(|ν₁|, |ν₂|) ≤ n`, and
//!
//! ```text
//! Y_{j,n}(x) = −1/(log n · G(n)) Σ_{|ν_k| ≤ n} S̃_{j,‖ν‖∞}(x) |c_ν|
//! ```
//!
//! with `G(n) = Σ_{|ν_k| ≤ n} |c_ν|` over the full square (both signs, unlike
//! the one-dimensional normalizer which only sums `ν ≥ 0`).
//!
//! Grouping the lattice sum by shell `m = ‖ν‖∞` and swapping summation order
//! turns `Y_{j,n}` into a trigonometric polynomial whose `μ`-coefficient is
//! `−i sign_j(μ) c_μ W_{‖μ‖∞}`, `W_m` being the tail of the shell masses.
//! Along any line parallel to axis `j` it is a 1D polynomial of degree `n`,
//! which is how fields are evaluated here.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Deserialize;

use crate::coeffs::{coefficients_analytic, CoefficientSet};
use crate::detector::{default_grid, pick_peaks, CalibrationResult, GRID_OVERSAMPLING};
use crate::error::{Error, Result};
use crate::grid::{eval_on_grid, Execution, Strategy};
use crate::kernel::{conjugate_dirichlet, dirichlet};
use crate::series::IMAG_RESIDUE_TOL;
use crate::signal::{
    builtin, make_constant, make_pulse, parse_signal, total_variation, SignalSpec,
};

/// Number of transverse slices averaged by detection and slice variation.
pub const TRANSVERSE_SLICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X1,
    X2,
}

impl Direction {
    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Direction::X1),
            2 => Ok(Direction::X2),
            _ => Err(Error::InvalidParameter(format!(
                "direction {j} (expected 1 or 2)"
            ))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Direction::X1 => 1,
            Direction::X2 => 2,
        }
    }

    fn other(self) -> Self {
        match self {
            Direction::X1 => Direction::X2,
            Direction::X2 => Direction::X1,
        }
    }

    /// `(along, across)` components of a point.
    fn split(self, x: [f64; 2]) -> (f64, f64) {
        match self {
            Direction::X1 => (x[0], x[1]),
            Direction::X2 => (x[1], x[0]),
        }
    }

    fn join(self, along: f64, across: f64) -> [f64; 2] {
        match self {
            Direction::X1 => [along, across],
            Direction::X2 => [across, along],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major, `(ν₁ + N) · (2N + 1) + (ν₂ + N)`.
    Dense(Vec<Complex64>),
    /// `c_{ν₁,ν₂} = Σ_t g_t(ν₁) h_t(ν₂)`.
    Separable(Vec<(CoefficientSet, CoefficientSet)>),
}

/// Coefficients `c_{ν₁,ν₂} = (2π)^{-2} ∫ f e^{−iν·x}` on `[−N, N]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGrid2D {
    max_index: usize,
    storage: Storage,
    hermitian: bool,
}

impl CoefficientGrid2D {
    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, nu1: i64, nu2: i64) -> Complex64 {
        match &self.storage {
            Storage::Dense(v) => {
                let n = self.max_index as i64;
                let w = 2 * n + 1;
                v[((nu1 + n) * w + (nu2 + n)) as usize]
            }
            Storage::Separable(terms) => terms.iter().map(|(g, h)| g.get(nu1) * h.get(nu2)).sum(),
        }
    }

    /// `c` indexed by `(along, across)` components for direction `j`.
    fn get_oriented(&self, j: Direction, along: i64, across: i64) -> Complex64 {
        match j {
            Direction::X1 => self.get(along, across),
            Direction::X2 => self.get(across, along),
        }
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n > self.max_index {
            return Err(Error::OutOfRange {
                order: n,
                max_index: self.max_index,
            });
        }
        Ok(())
    }

    /// Dense copy of the values, row-major in `ν₁`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.max_index as i64;
        (-n..=n)
            .flat_map(|a| (-n..=n).map(move |b| (a, b)))
            .map(|(a, b)| self.get(a, b))
            .collect()
    }

    /// Builds a grid from dense row-major values.
    pub fn from_dense(max_index: usize, values: Vec<Complex64>) -> Result<Self> {
        let w = 2 * max_index + 1;
        if values.len() != w * w {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                w * w,
                values.len()
            )));
        }
        let n = max_index as i64;
        let scale = values.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let at = |a: i64, b: i64| values[((a + n) * w as i64 + (b + n)) as usize];
        let hermitian = (-n..=n)
            .all(|a| (-n..=n).all(|b| (at(-a, -b) - at(a, b).conj()).norm() <= 1e-12 * scale));
        Ok(Self {
            max_index,
            storage: Storage::Dense(values),
            hermitian,
        })
    }
}

/// A field `f(x₁, x₂) = Σ_t g_t(x₁) h_t(x₂)` built from 1D signals.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableField {
    pub name: String,
    pub terms: Vec<(SignalSpec, SignalSpec)>,
}

impl SeparableField {
    pub fn new(name: impl Into<String>, terms: Vec<(SignalSpec, SignalSpec)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NonSeparable("field has no product terms".into()));
        }
        Ok(Self {
            name: name.into(),
            terms,
        })
    }

    pub fn evaluate(&self, x: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|(g, h)| g.evaluate(x[0]) * h.evaluate(x[1]))
            .sum()
    }

    /// Jump offsets across lines orthogonal to `j`, with their magnitudes
    /// evaluated on the transverse line `across`.
    pub fn hyperplanes(&self, j: Direction, across: f64) -> Vec<(f64, f64)> {
        let mut offsets: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|(g, h)| {
                let spec = if j == Direction::X1 { g } else { h };
                spec.true_jumps().entries.into_iter().map(|e| e.location)
            })
            .collect();
        offsets.sort_by(f64::total_cmp);
        offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        offsets
            .into_iter()
            .filter_map(|alpha| {
                let right = self.evaluate(j.join(alpha, across));
                let left: f64 = self
                    .terms
                    .iter()
                    .map(|(g, h)| match j {
                        Direction::X1 => g.left_limit(alpha) * h.evaluate(across),
                        Direction::X2 => g.evaluate(across) * h.left_limit(alpha),
                    })
                    .sum();
                let jump = right - left;
                (jump.abs() > 1e-12).then_some((alpha, jump))
            })
            .collect()
    }
}

/// `pulse(2π/3, 4π/3, 1)` in `x₁`, constant in `x₂`.
pub fn pulse_x() -> SeparableField {
    SeparableField::new(
        "pulse-x",
        vec![(builtin("pulse").expect("builtin"), make_constant(1.0))],
    )
    .expect("non-empty")
}

/// `pulse(2π/5, 6π/5, 1)` in `x₂`, constant in `x₁`.
pub fn pulse_y() -> SeparableField {
    let h = make_pulse(TAU / 5.0, 3.0 * TAU / 5.0, 1.0).expect("valid pulse");
    SeparableField::new("pulse-y", vec![(make_constant(1.0), h)]).expect("non-empty")
}

/// `pulse_x + pulse_y`.
pub fn cross() -> SeparableField {
    let mut terms = pulse_x().terms;
    terms.extend(pulse_y().terms);
    SeparableField::new("cross", terms).expect("non-empty")
}

pub fn constant_2d() -> SeparableField {
    SeparableField::new("constant2d", vec![(make_constant(1.0), make_constant(1.0))])
        .expect("non-empty")
}

pub const BUILTIN_2D_NAMES: [&str; 4] = ["pulse-x", "pulse-y", "cross", "constant2d"];

pub fn builtin_2d(name: &str) -> Option<SeparableField> {
    match name {
        "pulse-x" => Some(pulse_x()),
        "pulse-y" => Some(pulse_y()),
        "cross" => Some(cross()),
        "constant2d" => Some(constant_2d()),
        _ => None,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    #[serde(default)]
    name: Option<String>,
    terms: Vec<TermFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    x: Option<FactorFile>,
    y: Option<FactorFile>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FactorFile {
    Builtin(String),
    Inline(toml::Table),
}

fn load_factor(f: FactorFile) -> Result<SignalSpec> {
    match f {
        FactorFile::Builtin(name) => {
            builtin(&name).ok_or_else(|| Error::Parse(format!("unknown builtin signal {name:?}")))
        }
        FactorFile::Inline(table) => parse_signal(&table.to_string()),
    }
}

/// Loads a separable field from TOML.
///
/// ```toml
/// [[terms]]
/// x = "pulse"
/// y = "constant"
/// ```
///
/// Each factor is a builtin name or an inline signal table. A term lacking
/// either factor does not describe a product and is rejected.
pub fn parse_field_2d(text: &str) -> Result<SeparableField> {
    let file: FieldFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let terms = file
        .terms
        .into_iter()
        .enumerate()
        .map(|(i, t)| match (t.x, t.y) {
            (Some(x), Some(y)) => Ok((load_factor(x)?, load_factor(y)?)),
            _ => Err(Error::NonSeparable(format!(
                "term {i} must give both an x and a y factor"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    SeparableField::new(file.name.unwrap_or_else(|| "file".into()), terms)
}

/// Exact coefficients of a separable field: products of 1D coefficients.
pub fn coefficients_2d(field: &SeparableField, max_index: usize) -> CoefficientGrid2D {
    let terms = field
        .terms
        .iter()
        .map(|(g, h)| {
            (
                coefficients_analytic(g, max_index),
                coefficients_analytic(h, max_index),
            )
        })
        .collect();
    CoefficientGrid2D {
        max_index,
        storage: Storage::Separable(terms),
        hermitian: true,
    }
}

/// Coefficients from an `m1 × m2` sample grid (row-major in `x₁`), sampled at
/// `(2πi/m1, 2πk/m2)`.
pub fn coefficients_2d_from_samples(
    samples: &[f64],
    m1: usize,
    m2: usize,
    max_index: usize,
) -> Result<CoefficientGrid2D> {
    if samples.len() != m1 * m2 {
        return Err(Error::InvalidParameter(format!(
            "{} samples do not fill a {m1}×{m2} grid",
            samples.len()
        )));
    }
    let needed = 2 * max_index + 1;
    if m1.min(m2) < needed {
        return Err(Error::Aliasing {
            samples: m1.min(m2),
            max_index,
            needed,
        });
    }
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let rows = planner.plan_fft_forward(m2);
    for row in buf.chunks_mut(m2) {
        rows.process(row);
    }
    let cols = planner.plan_fft_forward(m1);
    let mut col = vec![Complex64::new(0.0, 0.0); m1];
    for k in 0..m2 {
        for i in 0..m1 {
            col[i] = buf[i * m2 + k];
        }
        cols.process(&mut col);
        for i in 0..m1 {
            buf[i * m2 + k] = col[i];
        }
    }
    let scale = 1.0 / (m1 * m2) as f64;
    let n = max_index as i64;
    let values = (-n..=n)
        .flat_map(|a| (-n..=n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let i = a.rem_euclid(m1 as i64) as usize;
            let k = b.rem_euclid(m2 as i64) as usize;
            buf[i * m2 + k] * scale
        })
        .collect();
    let mut grid = CoefficientGrid2D::from_dense(max_index, values)?;
    grid.hermitian = true;
    Ok(grid)
}

/// `D̃_n(x_j) · D_n(x_other)`.
pub fn conjugate_dirichlet_2d(j: Direction, n: usize, x: [f64; 2]) -> f64 {
    let (along, across) = j.split(x);
    conjugate_dirichlet(n, along) * dirichlet(n, across)
}

fn sign(v: i64) -> f64 {
    match v.cmp(&0) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Less => -1.0,
        std::cmp::Ordering::Equal => 0.0,
    }
}

fn checked_real(hermitian: bool, z: Complex64) -> Result<f64> {
    if hermitian && z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `S̃_{j,n}(x) = −i Σ_{|ν_k| ≤ n} sign_j(ν) c_ν e^{iν·x}` by direct lattice sum.
pub fn conjugate_partial_sum_2d(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    x: [f64; 2],
) -> Result<f64> {
    coeffs.check_order(n)?;
    let n = n as i64;
    let (along, across) = j.split(x);
    let across_rot: Vec<Complex64> = (-n..=n)
        .map(|b| Complex64::from_polar(1.0, b as f64 * across))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in (-n..=n).filter(|&a| a != 0) {
        let mut inner = Complex64::new(0.0, 0.0);
        for (b, rot) in (-n..=n).zip(&across_rot) {
            inner += coeffs.get_oriented(j, a, b) * rot;
        }
        acc += inner * Complex64::from_polar(sign(a), a as f64 * along);
    }
    checked_real(coeffs.hermitian, Complex64::new(acc.im, -acc.re))
}

/// How lattice points of one shell `‖ν‖∞ = m` are weighted in `Y_{j,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShellWeighting {
    /// Every lattice point contributes `|c_ν|`, so shell `m` carries the
    /// total `Σ_{‖ν‖∞=m} |c_ν|`.
    #[default]
    AsWritten,
    /// Shell `m ≥ 1` carries the mean `|c_ν|` over its `8m` points.
    ShellMean,
}

/// `Σ_{‖ν‖∞ = m} |c_ν|` for `m = 0..=n`.
pub fn shell_masses(coeffs: &CoefficientGrid2D, n: usize) -> Result<Vec<f64>> {
    coeffs.check_order(n)?;
    let n = n as i64;
    let mut shells = vec![0.0; n as usize + 1];
    for a in -n..=n {
        for b in -n..=n {
            shells[a.abs().max(b.abs()) as usize] += coeffs.get(a, b).norm();
        }
    }
    Ok(shells)
}

/// `G(n) = Σ_{|ν_k| ≤ n} |c_ν|`.
pub fn coefficient_mass_2d(coeffs: &CoefficientGrid2D, n: usize) -> Result<f64> {
    Ok(shell_masses(coeffs, n)?.iter().sum())
}

/// Tail weights `W_m = Σ_{m' ≥ m} w_{m'}` and the normalizer `log n · G(n)`.
struct Weights {
    tail: Vec<f64>,
    normalizer: f64,
}

fn weights(coeffs: &CoefficientGrid2D, n: usize, weighting: ShellWeighting) -> Result<Weights> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let shells = shell_masses(coeffs, n)?;
    let g: f64 = shells.iter().sum();
    let mut tail = vec![0.0; n + 1];
    let mut acc = 0.0;
    for m in (1..=n).rev() {
        acc += match weighting {
            ShellWeighting::AsWritten => shells[m],
            ShellWeighting::ShellMean => shells[m] / (8 * m) as f64,
        };
        tail[m] = acc;
    }
    Ok(Weights {
        tail,
        normalizer: (n as f64).ln() * g,
    })
}

/// `Y_{j,n}(x)` by direct lattice summation. Zero when `G(n) = 0`.
pub fn y_jn(coeffs: &CoefficientGrid2D, j: Direction, n: usize, x: [f64; 2]) -> Result<f64> {
    y_jn_with(coeffs, j, n, x, ShellWeighting::AsWritten)
}

pub fn y_jn_with(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    x: [f64; 2],
    weighting: ShellWeighting,
) -> Result<f64> {
    let w = weights(coeffs, n, weighting)?;
    if w.normalizer == 0.0 {
        return Ok(0.0);
    }
    let (along, across) = j.split(x);
    let line = line_coefficients(coeffs, j, n, across, &w);
    let z = crate::grid::eval_point(&line, along);
    checked_real(coeffs.hermitian, z)
}

/// Coefficients `d_a` (`a = −n..=n`) of `Y_{j,n}` restricted to the line with
/// transverse coordinate `across`.
fn line_coefficients(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    across: f64,
    w: &Weights,
) -> Vec<Complex64> {
    let n = n as i64;
    let mut d = vec![Complex64::new(0.0, 0.0); 2 * n as usize + 1];
    if w.normalizer == 0.0 {
        return d;
    }
    let scale = -1.0 / w.normalizer;
    let across_rot: Vec<Complex64> = (-n..=n)
        .map(|b| Complex64::from_polar(1.0, b as f64 * across))
        .collect();
    for a in (-n..=n).filter(|&a| a != 0) {
        let mut inner = Complex64::new(0.0, 0.0);
        for (b, rot) in (-n..=n).zip(&across_rot) {
            let shell = a.abs().max(b.abs()) as usize;
            inner += coeffs.get_oriented(j, a, b) * rot * w.tail[shell];
        }
        // −i · sign(a) · inner · scale
        let v = inner * (sign(a) * scale);
        d[(a + n) as usize] = Complex64::new(v.im, -v.re);
    }
    d
}

/// `Y_{j,n}` along direction `j` at `grid` uniform points, on the line whose
/// transverse coordinate is `across`.
pub fn y_jn_line(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    across: f64,
    grid: usize,
    weighting: ShellWeighting,
) -> Result<Vec<f64>> {
    let w = weights(coeffs, n, weighting)?;
    let needed = GRID_OVERSAMPLING * n;
    if grid < needed {
        return Err(Error::GridTooCoarse {
            grid,
            order: n,
            needed,
        });
    }
    let d = line_coefficients(coeffs, j, n, across, &w);
    eval_on_grid(&d, grid, Strategy::Auto, Execution::Sequential)
        .into_iter()
        .map(|z| checked_real(coeffs.hermitian, z))
        .collect()
}

/// Mean of [`y_jn_line`] over several transverse coordinates.
///
/// Lines are evaluated in parallel and summed in their given order.
pub fn y_jn_mean_line(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    across: &[f64],
    grid: usize,
    weighting: ShellWeighting,
) -> Result<Vec<f64>> {
    let lines = across
        .par_iter()
        .map(|&t| y_jn_line(coeffs, j, n, t, grid, weighting))
        .collect::<Result<Vec<_>>>()?;
    let mut mean = vec![0.0; grid];
    for line in &lines {
        for (m, v) in mean.iter_mut().zip(line) {
            *m += v;
        }
    }
    let k = lines.len().max(1) as f64;
    mean.iter_mut().for_each(|m| *m /= k);
    Ok(mean)
}

/// Transverse coordinates `lo + (s + ½)(hi − lo)/8`.
fn slice_positions(lo: f64, hi: f64) -> Vec<f64> {
    (0..TRANSVERSE_SLICES)
        .map(|s| lo + (s as f64 + 0.5) * (hi - lo) / TRANSVERSE_SLICES as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperplaneEntry {
    pub offset: f64,
    pub magnitude: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneReport {
    pub direction: Direction,
    pub n: usize,
    pub entries: Vec<HyperplaneEntry>,
    pub k_used: f64,
    pub normalizer: f64,
}

const REFERENCE_OFFSET: f64 = TAU / 3.0;

/// `K̂₂ = (2π)² · Y_{1,n}(2π/3, ·)` on the unit pulse-in-x field.
pub fn calibrate_k_2d(n: usize) -> Result<CalibrationResult> {
    let field = pulse_x();
    let coeffs = coefficients_2d(&field, n);
    let y = y_jn(&coeffs, Direction::X1, n, [REFERENCE_OFFSET, PI / 2.0])?;
    Ok(CalibrationResult {
        k: TAU * TAU * y,
        n,
        reference: field.name,
    })
}

/// Jump lines orthogonal to `j`: peaks of `|Ȳ_{j,n}|`, the field averaged
/// over eight transverse lines.
pub fn detect_hyperplanes(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    n: usize,
    threshold_ratio: f64,
    calibration: &CalibrationResult,
) -> Result<HyperplaneReport> {
    if !(threshold_ratio > 0.0 && threshold_ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold ratio {threshold_ratio} outside (0, 1)"
        )));
    }
    let w = weights(coeffs, n, ShellWeighting::AsWritten)?;
    let across = slice_positions(0.0, TAU);
    let grid = default_grid(n);
    let mean = y_jn_mean_line(coeffs, j, n, &across, grid, ShellWeighting::AsWritten)?;
    let h = TAU / grid as f64;
    let entries = pick_peaks(&mean, threshold_ratio)
        .into_iter()
        .map(|(i, offset, score)| {
            let alpha = ((i as f64 + offset) * h).rem_euclid(TAU);
            let y = across
                .iter()
                .map(|&t| y_jn(coeffs, j, n, j.join(alpha, t)))
                .sum::<Result<f64>>()?
                / across.len() as f64;
            Ok(HyperplaneEntry {
                offset: alpha,
                magnitude: TAU * TAU * y / calibration.k,
                score,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = entries;
    entries.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    Ok(HyperplaneReport {
        direction: j,
        n,
        entries,
        k_used: calibration.k,
        normalizer: w.normalizer,
    })
}

/// Axis-aligned rectangle `(x1.0, x1.1) × (x2.0, x2.1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x1: (f64, f64),
    pub x2: (f64, f64),
}

impl Rect {
    pub fn new(x1: (f64, f64), x2: (f64, f64)) -> Result<Self> {
        for (a, b) in [x1, x2] {
            if !(a >= 0.0 && a < b && b <= TAU) {
                return Err(Error::InvalidInterval { a, b });
            }
        }
        Ok(Self { x1, x2 })
    }

    fn extent(&self, d: Direction) -> (f64, f64) {
        match d {
            Direction::X1 => self.x1,
            Direction::X2 => self.x2,
        }
    }
}

/// Mean over eight transverse lines inside `rect` of the discrete total
/// variation of `Y_{j,n}` along `j`, restricted to the rectangle's
/// `j`-extent. Stands in for the Hardy–Krause variation of the field.
pub fn rectangle_slice_variation(
    coeffs: &CoefficientGrid2D,
    j: Direction,
    rect: &Rect,
    n: usize,
) -> Result<f64> {
    let (a, b) = rect.extent(j);
    let (lo, hi) = rect.extent(j.other());
    let needed = GRID_OVERSAMPLING * n;
    let grid = ((needed as f64 * TAU / (b - a)).ceil() as usize).next_power_of_two();
    let across = slice_positions(lo, hi);
    let totals = across
        .par_iter()
        .map(|&t| {
            let line = y_jn_line(coeffs, j, n, t, grid, ShellWeighting::AsWritten)?;
            let h = TAU / grid as f64;
            let inside: Vec<f64> = line
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    let x = *i as f64 * h;
                    x > a && x < b
                })
                .map(|(_, v)| *v)
                .collect();
            total_variation(&inside)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(totals.iter().sum::<f64>() / totals.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_constant_factor_kills_transverse_modes() {
        let c = coefficients_2d(&pulse_x(), 16);
        let g = coefficients_analytic(&builtin("pulse").unwrap(), 16);
        for a in -16..=16 {
            assert!((c.get(a, 0) - g.get(a)).norm() < 1e-15);
            for b in [-3, 1, 16] {
                assert!(c.get(a, b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn constant_field_has_only_mean() {
        let c = coefficients_2d(&constant_2d(), 8);
        assert!((c.get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(c.get(3, -2).norm() < 1e-15 && c.get(0, 5).norm() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(conjugate_dirichlet_2d(Direction::X1, 5, [0.0, 1.0]), 0.0);
        assert_eq!(conjugate_dirichlet_2d(Direction::X2, 5, [1.0, 0.0]), 0.0);
        assert!(conjugate_dirichlet_2d(Direction::X1, 1, [PI, 0.0]).abs() < 1e-15);
    }

    #[test]
    fn kernel_matches_lattice_sum() {
        // −i Σ sign₁(ν) e^{iν·x} over the square equals 4 D̃_n(x₁) D_n(x₂)
        let (n, x) = (4i64, [0.5, 0.9]);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in -n..=n {
            for b in -n..=n {
                acc += Complex64::new(0.0, -sign(a))
                    * Complex64::from_polar(1.0, a as f64 * x[0] + b as f64 * x[1]);
            }
        }
        assert!(acc.im.abs() < 1e-12);
        let k = conjugate_dirichlet_2d(Direction::X1, n as usize, x);
        assert!((acc.re / 4.0 - k).abs() < 1e-10);
    }

    #[test]
    fn conjugate_sum_2d_examples() {
        let c = coefficients_2d(&pulse_x(), 16);
        for x in [[0.3, 1.0], [2.0, 4.0]] {
            assert!(
                conjugate_partial_sum_2d(&c, Direction::X2, 16, x)
                    .unwrap()
                    .abs()
                    < 1e-15
            );
        }
        let cos = CoefficientGrid2D::from_dense(
            2,
            (-2i64..=2)
                .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
                .map(|(a, b)| {
                    if a.abs() == 1 && b == 0 {
                        Complex64::new(0.5, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect(),
        )
        .unwrap();
        for x in [[0.4, 1.0], [2.2, 0.1]] {
            let v = conjugate_partial_sum_2d(&cos, Direction::X1, 2, x).unwrap();
            assert!((v - x[0].sin()).abs() < 1e-15);
        }
        assert!(conjugate_partial_sum_2d(&c, Direction::X1, 17, [0.0, 0.0]).is_err());
    }

    #[test]
    fn y_jn_matches_literal_lattice_sum() {
        let n = 6;
        let c = coefficients_2d(&cross(), n);
        let x = [1.1, 2.3];
        let g: f64 = (-6i64..=6)
            .flat_map(|a| (-6i64..=6).map(move |b| (a, b)))
            .map(|(a, b)| c.get(a, b).norm())
            .sum();
        let mut sum = 0.0;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let m = a.abs().max(b.abs()) as usize;
                let s = conjugate_partial_sum_2d(&c, Direction::X1, m, x).unwrap();
                sum += s * c.get(a, b).norm();
            }
        }
        let oracle = -sum / ((n as f64).ln() * g);
        let fast = y_jn(&c, Direction::X1, n, x).unwrap();
        assert!((fast - oracle).abs() < 1e-13, "{fast} {oracle}");
    }

    #[test]
    fn line_matches_pointwise() {
        let n = 32;
        let c = coefficients_2d(&cross(), n);
        let line = y_jn_line(&c, Direction::X2, n, 0.7, 512, ShellWeighting::AsWritten).unwrap();
        for i in (0..512).step_by(29) {
            let s = TAU * i as f64 / 512.0;
            let p = y_jn(&c, Direction::X2, n, [0.7, s]).unwrap();
            assert!((line[i] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn y_only_field_is_blind_in_x1() {
        let c = coefficients_2d(&pulse_y(), 64);
        for x in [[0.3, 1.2566], [2.0, 3.7], [5.0, 0.1]] {
            assert!(y_jn(&c, Direction::X1, 64, x).unwrap().abs() <= 1e-12);
        }
        let c = coefficients_2d(&constant_2d(), 16);
        assert!(y_jn(&c, Direction::X2, 16, [1.0, 1.0]).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn shell_mean_variant_differs_but_keeps_peaks() {
        let n = 64;
        let c = coefficients_2d(&pulse_x(), n);
        let a = y_jn_line(&c, Direction::X1, n, 1.0, 1024, ShellWeighting::AsWritten).unwrap();
        let b = y_jn_line(&c, Direction::X1, n, 1.0, 1024, ShellWeighting::ShellMean).unwrap();
        assert!(a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-6));
        let argmax = |v: &[f64]| {
            v.iter()
                .enumerate()
                .max_by(|p, q| p.1.abs().total_cmp(&q.1.abs()))
                .unwrap()
                .0
        };
        let step = TAU / 1024.0;
        // the shell-mean weights decay like 1/m², which blurs the peaks
        for (v, tol) in [(&a, step), (&b, 16.0 * step)] {
            let x = argmax(v) as f64 * step;
            assert!(
                (x - TAU / 3.0).abs() <= tol || (x - 2.0 * TAU / 3.0).abs() <= tol,
                "{x}"
            );
        }
    }

    #[test]
    fn parses_field_files() {
        let f = parse_field_2d("[[terms]]\nx = \"pulse\"\ny = \"constant\"\n").unwrap();
        assert_eq!(f.terms, pulse_x().terms);
        let err = parse_field_2d("[[terms]]\nx = \"pulse\"\n").unwrap_err();
        assert!(matches!(err, Error::NonSeparable(_)));
        assert!(parse_field_2d("terms = []").is_err());
        let inline = r#"
[[terms]]
y = "constant"
[terms.x]
pieces = [
  { start = "0", end = "1/2", coeffs = [1.0] },
  { start = "1/2", end = "1", coeffs = [1.0] },
]
"#;
        assert!(parse_field_2d(inline).is_ok());
    }

    #[test]
    fn hyperplane_ground_truth() {
        let h = cross().hyperplanes(Direction::X1, 0.5);
        assert_eq!(h.len(), 2);
        assert!((h[0].0 - TAU / 3.0).abs() < 1e-12 && (h[0].1 - 1.0).abs() < 1e-12);
        let h = cross().hyperplanes(Direction::X2, 0.5);
        assert!((h[0].0 - TAU / 5.0).abs() < 1e-12 && (h[1].1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rect_validation() {
        assert!(Rect::new((1.0, 0.5), (0.0, 1.0)).is_err());
        assert!(Rect::new((0.0, 7.0), (0.0, 1.0)).is_err());
        assert!(Rect::new((0.5, 1.0), (0.0, TAU)).is_ok());
    }

    #[test]
    fn constant_field_has_no_variation_or_planes() {
        let c = coefficients_2d(&constant_2d(), 32);
        let r = Rect::new((0.5, 3.0), (0.5, 3.0)).unwrap();
        assert!(rectangle_slice_variation(&c, Direction::X1, &r, 32).unwrap() < 1e-12);
        let cal = calibrate_k_2d(32).unwrap();
        for j in [Direction::X1, Direction::X2] {
            assert!(detect_hyperplanes(&c, j, 32, 0.25, &cal)
                .unwrap()
                .entries
                .is_empty());
        }
    }

    #[test]
    fn sampled_coefficients_match_separable() {
        let (m, n) = (64, 4);
        let field = cross();
        let samples: Vec<f64> = (0..m)
            .flat_map(|i| (0..m).map(move |k| (i, k)))
            .map(|(i, k)| field.evaluate([TAU * i as f64 / m as f64, TAU * k as f64 / m as f64]))
            .collect();
        let s = coefficients_2d_from_samples(&samples, m, m, n).unwrap();
        let a = coefficients_2d(&field, n);
        for (x, y) in s.to_dense().iter().zip(a.to_dense()) {
            assert!((x - y).norm() < 0.05);
        }
        assert!(coefficients_2d_from_samples(&samples, m, m, 40).is_err());
        assert!(coefficients_2d_from_samples(&samples[1..], m, m, 4).is_err());
    }
}
