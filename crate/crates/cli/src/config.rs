//! Command-line surface and its validated form.

use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conjugate_jumps::detector::{Estimator, DEFAULT_THRESHOLD, GRID_OVERSAMPLING};
use conjugate_jumps::signal::parse_turns;
use conjugate_jumps::torus::Direction;

use crate::error::RunError;

#[derive(Debug, Parser)]
#[command(
    name = "cjumps",
    version,
    about = "Locate and size jumps of periodic signals from their Fourier coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Emit the detector field as (x, Y_n(x)) rows.
    Analyze(Common),
    /// Emit detected jumps.
    Detect(Common),
    /// Emit the field variation over an interval.
    Variation(Common),
    /// Emit probe values over a range of orders.
    Sweep(Common),
    /// Emit detected jump lines of a two-dimensional field.
    Detect2d(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Built-in signal name or path to a signal file.
    #[arg(long, conflicts_with = "samples")]
    pub signal: Option<String>,
    /// Text file with one sample per line on the uniform grid 2πm/M.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Orders lo, lo·factor, … up to hi, written `lo:hi:factor`.
    #[arg(long, value_name = "LO:HI:FACTOR")]
    pub n_range: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// `a:b`, each end in radians or as `p/q*2pi`.
    #[arg(long, value_name = "A:B")]
    pub interval: Option<String>,
    /// 1 or 2; both directions when omitted.
    #[arg(long)]
    pub direction: Option<usize>,
    /// Probe point for `sweep`; repeatable.
    #[arg(long = "probe", value_name = "X")]
    pub probes: Vec<String>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Yn)]
    pub estimator: EstimatorArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Yn,
    Lukacs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Detect,
    Variation,
    Sweep,
    Detect2d,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Built-in name or signal file, resolved at run time.
    Signal(String),
    Samples(PathBuf),
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    /// Orders to evaluate; a single entry except for `sweep`.
    pub orders: Vec<usize>,
    pub grid: Option<usize>,
    pub threshold: f64,
    pub interval: Option<(f64, f64)>,
    pub directions: Vec<Direction>,
    pub probes: Vec<f64>,
    pub estimator: Estimator,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, RunError> {
        let (command, args) = match cli.command {
            CommandArgs::Analyze(a) => (Command::Analyze, a),
            CommandArgs::Detect(a) => (Command::Detect, a),
            CommandArgs::Variation(a) => (Command::Variation, a),
            CommandArgs::Sweep(a) => (Command::Sweep, a),
            CommandArgs::Detect2d(a) => (Command::Detect2d, a),
        };
        Self::new(command, args)
    }

    pub fn new(command: Command, args: Common) -> Result<Self, RunError> {
        let source = match (args.signal, args.samples) {
            (Some(s), None) => Source::Signal(s),
            (None, Some(p)) => Source::Samples(p),
            _ => {
                return Err(RunError::config(
                    "exactly one of --signal or --samples is required",
                ))
            }
        };
        if command == Command::Detect2d && matches!(source, Source::Samples(_)) {
            return Err(RunError::config("detect2d reads --signal only"));
        }

        let orders = match (command, args.n, args.n_range) {
            (Command::Sweep, None, Some(r)) => parse_range(&r)?,
            (Command::Sweep, Some(n), None) => vec![n],
            (Command::Sweep, _, _) => {
                return Err(RunError::config(
                    "sweep needs exactly one of --n or --n-range",
                ))
            }
            (_, Some(n), None) => vec![n],
            (_, _, Some(_)) => return Err(RunError::config("--n-range applies to sweep only")),
            (_, None, None) => return Err(RunError::config("--n is required")),
        };
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(RunError::config(format!("order {n} must be at least 2")));
        }
        let top = *orders.iter().max().expect("non-empty");
        if let Some(g) = args.grid {
            if g < GRID_OVERSAMPLING * top {
                return Err(RunError::config(format!(
                    "grid {g} is below {GRID_OVERSAMPLING}·n = {}",
                    GRID_OVERSAMPLING * top
                )));
            }
        }
        if !(args.threshold > 0.0 && args.threshold < 1.0) {
            return Err(RunError::config(format!(
                "threshold {} outside (0, 1)",
                args.threshold
            )));
        }

        let interval = args.interval.as_deref().map(parse_interval).transpose()?;
        if command == Command::Variation && interval.is_none() {
            return Err(RunError::config("variation needs --interval"));
        }
        let directions = match args.direction {
            None => vec![Direction::X1, Direction::X2],
            Some(j) => vec![Direction::from_index(j).map_err(|e| RunError::config(e.to_string()))?],
        };
        let probes = args
            .probes
            .iter()
            .map(|p| parse_angle(p))
            .collect::<Result<Vec<_>, _>>()?;
        if command == Command::Sweep && probes.is_empty() {
            return Err(RunError::config("sweep needs at least one --probe"));
        }

        Ok(Self {
            command,
            source,
            orders,
            grid: args.grid,
            threshold: args.threshold,
            interval,
            directions,
            probes,
            estimator: match args.estimator {
                EstimatorArg::Yn => Estimator::YnCalibrated,
                EstimatorArg::Lukacs => Estimator::Lukacs,
            },
            out: args.out,
            format: args.format,
        })
    }
}

/// An angle in radians, or `p/q*2pi` for the exact fraction `p/q` of the period.
pub fn parse_angle(s: &str) -> Result<f64, RunError> {
    let s = s.trim();
    let value = match s.strip_suffix("*2pi") {
        Some(frac) => parse_turns(frac).map_err(|e| RunError::config(e.to_string()))?,
        None if s == "2pi" => TAU,
        None => s
            .parse::<f64>()
            .map_err(|_| RunError::config(format!("bad angle {s:?}")))?,
    };
    if !value.is_finite() {
        return Err(RunError::config(format!("bad angle {s:?}")));
    }
    Ok(value)
}

pub fn parse_interval(s: &str) -> Result<(f64, f64), RunError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| RunError::config(format!("interval {s:?} is not a:b")))?;
    let (a, b) = (parse_angle(a)?, parse_angle(b)?);
    if !(a > 0.0 && a < b && b < TAU) {
        return Err(RunError::config(format!(
            "interval ({a}, {b}) must satisfy 0 < a < b < 2π"
        )));
    }
    Ok((a, b))
}

/// `lo:hi:factor` → `lo, lo·factor, …` while `≤ hi`.
pub fn parse_range(s: &str) -> Result<Vec<usize>, RunError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, factor] = parts[..] else {
        return Err(RunError::config(format!("range {s:?} is not lo:hi:factor")));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| RunError::config(format!("bad range bound {t:?}")))
    };
    let (lo, hi, factor) = (num(lo)?, num(hi)?, num(factor)?);
    if lo < 2 || hi < lo || factor < 2 {
        return Err(RunError::config(format!(
            "range {s:?} needs 2 ≤ lo ≤ hi and factor ≥ 2"
        )));
    }
    let mut out = vec![];
    let mut n = lo;
    while n <= hi {
        out.push(n);
        n = match n.checked_mul(factor) {
            Some(next) => next,
            None => break,
        };
    }
    Ok(out)
}
