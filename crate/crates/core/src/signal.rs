//! Piecewise-polynomial 2π-periodic signals with explicit jump sets.
//!
//! These are the ground-truth generators for every test: their Fourier
//! coefficients are known in closed form and their jumps are known exactly.

use std::f64::consts::{PI, TAU};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Highest polynomial degree allowed for a piece.
pub const MAX_DEGREE: usize = 5;

const BREAKPOINT_TOL: f64 = 1e-12;
const JUMP_TOL: f64 = 1e-12;

/// Polynomial in the absolute coordinate `x` (radians), lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

/// One polynomial piece on the open interval `(start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub poly: Polynomial,
}

/// A 2π-periodic piecewise-polynomial signal.
///
/// Pieces partition `(0, 2π)` in order. The signal is continuous across 0 and
/// across π (if π is a breakpoint). Point evaluation is right-continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    name: String,
    pieces: Vec<Piece>,
}

/// Location and signed magnitude `f(x+0) − f(x−0)` of one discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub location: f64,
    pub magnitude: f64,
}

/// Discontinuities of a signal, ordered by location.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JumpSet {
    pub entries: Vec<Jump>,
}

impl JumpSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn locations(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|j| j.location)
    }

    /// Sum of `|J|` over jumps strictly inside `(a, b)`.
    pub fn mass_in(&self, a: f64, b: f64) -> f64 {
        self.entries
            .iter()
            .filter(|j| j.location > a && j.location < b)
            .map(|j| j.magnitude.abs())
            .sum()
    }
}

impl SignalSpec {
    pub fn new(name: impl Into<String>, pieces: Vec<Piece>) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            pieces,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSignal(msg));
        let (first, last) = match (self.pieces.first(), self.pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return invalid("no pieces".into()),
        };
        if first.start.abs() > BREAKPOINT_TOL {
            return invalid(format!(
                "first piece starts at {} instead of 0",
                first.start
            ));
        }
        if (last.end - TAU).abs() > BREAKPOINT_TOL {
            return invalid(format!("last piece ends at {} instead of 2π", last.end));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if !(p.start.is_finite() && p.end.is_finite()) || p.start >= p.end {
                return invalid(format!(
                    "piece {i} has empty interval ({}, {})",
                    p.start, p.end
                ));
            }
            if p.poly.degree() > MAX_DEGREE {
                return invalid(format!(
                    "piece {i} has degree {} (maximum {MAX_DEGREE})",
                    p.poly.degree()
                ));
            }
            if p.poly.coeffs().iter().any(|c| !c.is_finite()) {
                return invalid(format!("piece {i} has a non-finite coefficient"));
            }
        }
        for (i, w) in self.pieces.windows(2).enumerate() {
            if (w[0].end - w[1].start).abs() > BREAKPOINT_TOL {
                return invalid(format!("gap or overlap between pieces {i} and {}", i + 1));
            }
        }
        let wrap = first.poly.eval(0.0) - last.poly.eval(TAU);
        if wrap.abs() > 1e-9 {
            return invalid(format!("jump of {wrap} at 0 / 2π"));
        }
        for w in self.pieces.windows(2) {
            if (w[0].end - PI).abs() <= BREAKPOINT_TOL {
                let j = w[1].poly.eval(PI) - w[0].poly.eval(PI);
                if j.abs() > JUMP_TOL {
                    return invalid(format!("jump of {j} at π"));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Value at `x` (reduced mod 2π); right limit at breakpoints.
    pub fn evaluate(&self, x: f64) -> f64 {
        let x = x.rem_euclid(TAU);
        let idx = self
            .pieces
            .partition_point(|p| p.end <= x)
            .min(self.pieces.len() - 1);
        self.pieces[idx].poly.eval(x)
    }

    /// Left limit `f(x−0)`.
    pub fn left_limit(&self, x: f64) -> f64 {
        let x = x.rem_euclid(TAU);
        let x = if x == 0.0 { TAU } else { x };
        let idx = self.pieces.partition_point(|p| p.end < x);
        self.pieces[idx.min(self.pieces.len() - 1)].poly.eval(x)
    }

    /// Exact jump set from the limits of adjacent pieces.
    pub fn true_jumps(&self) -> JumpSet {
        let entries = self
            .pieces
            .windows(2)
            .filter_map(|w| {
                let x = w[0].end;
                let magnitude = w[1].poly.eval(x) - w[0].poly.eval(x);
                (magnitude.abs() > JUMP_TOL).then_some(Jump {
                    location: x,
                    magnitude,
                })
            })
            .collect();
        JumpSet { entries }
    }

    /// `(1/2π) ∫ f² dx`, exact.
    pub fn mean_square(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let c = p.poly.coeffs();
                let mut sq = vec![0.0; 2 * c.len() - 1];
                for (i, a) in c.iter().enumerate() {
                    for (j, b) in c.iter().enumerate() {
                        sq[i + j] += a * b;
                    }
                }
                let anti = Polynomial::new(sq).antiderivative();
                anti.eval(p.end) - anti.eval(p.start)
            })
            .sum::<f64>()
            / TAU
    }

    /// Signal translated by `delta`: `g(x) = f(x − delta)`.
    ///
    /// Only piecewise-constant signals are supported, since shifting a
    /// polynomial in the absolute coordinate changes its coefficients.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        if self.pieces.iter().any(|p| p.poly.degree() > 0) {
            return Err(Error::InvalidSignal(
                "shift is only implemented for piecewise-constant signals".into(),
            ));
        }
        let mut cuts: Vec<(f64, f64)> = self
            .true_jumps()
            .entries
            .iter()
            .map(|j| ((j.location + delta).rem_euclid(TAU), j.magnitude))
            .collect();
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let base = self.evaluate(-delta);
        let mut value = base;
        let mut start = 0.0;
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for (x, j) in cuts {
            pieces.push(Piece {
                start,
                end: x,
                poly: Polynomial::constant(value),
            });
            value += j;
            start = x;
        }
        pieces.push(Piece {
            start,
            end: TAU,
            poly: Polynomial::constant(value),
        });
        Self::new(format!("{}+shift", self.name), pieces)
    }
}

/// Indicator pulse of height `h` on `(a, b)`.
pub fn make_pulse(a: f64, b: f64, h: f64) -> Result<SignalSpec> {
    if !(a > 0.0 && a < b && b < TAU) {
        return Err(Error::InvalidInterval { a, b });
    }
    if a == PI || b == PI {
        return Err(Error::InvalidSignal("pulse edge at π".into()));
    }
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidSignal(format!("pulse height {h}")));
    }
    SignalSpec::new(
        format!("pulse({a},{b},{h})"),
        vec![
            Piece {
                start: 0.0,
                end: a,
                poly: Polynomial::constant(0.0),
            },
            Piece {
                start: a,
                end: b,
                poly: Polynomial::constant(h),
            },
            Piece {
                start: b,
                end: TAU,
                poly: Polynomial::constant(0.0),
            },
        ],
    )
}

/// `2·1_(2π/5, 6π/5) + 1_(4π/5, 8π/5)`.
pub fn make_staircase() -> SignalSpec {
    let cuts = [
        0.0,
        TAU / 5.0,
        2.0 * TAU / 5.0,
        3.0 * TAU / 5.0,
        4.0 * TAU / 5.0,
        TAU,
    ];
    let levels = [0.0, 2.0, 3.0, 1.0, 0.0];
    let pieces = cuts
        .windows(2)
        .zip(levels)
        .map(|(w, v)| Piece {
            start: w[0],
            end: w[1],
            poly: Polynomial::constant(v),
        })
        .collect();
    SignalSpec::new("staircase", pieces).expect("staircase is valid")
}

/// Linear ramp `x/π` on `(2π/3, 4π/3)`, zero elsewhere; jumps `+2/3` and `−4/3`.
pub fn make_ramp() -> SignalSpec {
    let (a, b) = (TAU / 3.0, 2.0 * TAU / 3.0);
    SignalSpec::new(
        "ramp",
        vec![
            Piece {
                start: 0.0,
                end: a,
                poly: Polynomial::constant(0.0),
            },
            Piece {
                start: a,
                end: b,
                poly: Polynomial::new(vec![0.0, 1.0 / PI]),
            },
            Piece {
                start: b,
                end: TAU,
                poly: Polynomial::constant(0.0),
            },
        ],
    )
    .expect("ramp is valid")
}

pub fn make_constant(c: f64) -> SignalSpec {
    SignalSpec::new(
        "constant",
        vec![Piece {
            start: 0.0,
            end: TAU,
            poly: Polynomial::constant(c),
        }],
    )
    .expect("constant is valid")
}

/// The reference unit-jump pulse on `(2π/3, 4π/3)`.
pub fn reference_pulse() -> SignalSpec {
    let mut s = make_pulse(TAU / 3.0, 2.0 * TAU / 3.0, 1.0).expect("valid reference");
    s.name = "pulse".into();
    s
}

/// Named built-in signals. Every jump sits at a rational multiple of 2π.
pub fn builtin(name: &str) -> Option<SignalSpec> {
    let spec = match name {
        "pulse" => reference_pulse(),
        "pulse2" => {
            let mut s = make_pulse(TAU / 5.0, 3.0 * TAU / 5.0, 2.0).ok()?;
            s.name = "pulse2".into();
            s
        }
        "staircase" => make_staircase(),
        "ramp" => make_ramp(),
        "constant" => make_constant(1.0),
        _ => return None,
    };
    Some(spec)
}

pub const BUILTIN_NAMES: [&str; 5] = ["pulse", "pulse2", "staircase", "ramp", "constant"];

/// All built-in signals.
pub fn corpus() -> Vec<SignalSpec> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("builtin"))
        .collect()
}

/// Discrete total variation `Σ |v[i+1] − v[i]|`.
pub fn total_variation(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: values.len(),
        });
    }
    Ok(values.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalFile {
    #[serde(default)]
    name: Option<String>,
    pieces: Vec<PieceFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceFile {
    start: String,
    end: String,
    coeffs: Vec<f64>,
}

/// Parses `"p/q"` (or an integer) as the angle `p/q · 2π`.
pub fn parse_turns(s: &str) -> Result<f64> {
    let r: num_rational::Ratio<i64> = s
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(*r.numer() as f64 / *r.denom() as f64 * TAU)
}

/// Loads a signal from its TOML form.
///
/// ```toml
/// name = "pulse"
/// [[pieces]]
/// start = "0"
/// end = "1/3"
/// coeffs = [0.0]
/// ```
///
/// Endpoints are exact fractions of the period; `coeffs` are polynomial
/// coefficients in `x` (radians), lowest power first.
pub fn parse_signal(text: &str) -> Result<SignalSpec> {
    let file: SignalFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let pieces = file
        .pieces
        .into_iter()
        .map(|p| {
            Ok(Piece {
                start: parse_turns(&p.start)?,
                end: parse_turns(&p.end)?,
                poly: Polynomial::new(p.coeffs),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SignalSpec::new(file.name.unwrap_or_else(|| "file".into()), pieces)
}
