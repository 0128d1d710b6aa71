//! Command dispatch and result rows.

use std::io::Write;

use conjugate_jumps::detector::{
    calibrate_k, calibrate_variation_k, cyclic_variation, default_grid, detect_jumps_with,
    interval_variation, normalizer, y_n, y_n_field, DetectOptions, GRID_OVERSAMPLING,
};
use conjugate_jumps::series::{coefficient_mass, conjugate_partial_sum};
use conjugate_jumps::torus::{calibrate_k_2d, coefficients_2d, detect_hyperplanes};
use serde::Serialize;

use crate::config::{Command, Format, RunConfig};
use crate::error::RunError;
use crate::input::{load_coefficients, load_field};

/// Marks rows computed from a signal whose coefficient mass vanishes.
pub const DEGENERATE_NOTE: &str = "warning: G(n)=0";

fn note(normalizer: f64) -> &'static str {
    if normalizer == 0.0 {
        DEGENERATE_NOTE
    } else {
        ""
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldRow {
    pub x_rad: f64,
    pub y_n: f64,
    pub n: usize,
    pub normalizer: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectRow {
    pub location_rad: Option<f64>,
    pub magnitude_est: Option<f64>,
    pub score: Option<f64>,
    pub n: usize,
    #[serde(rename = "K_used")]
    pub k_used: f64,
    pub normalizer: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationRow {
    pub a_rad: f64,
    pub b_rad: f64,
    pub n: usize,
    pub tv: f64,
    pub jump_mass_est: f64,
    #[serde(rename = "K_var")]
    pub k_var: f64,
    pub grid_density: usize,
    pub normalizer: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub probe_x: f64,
    pub conj_partial_sum: f64,
    pub y_n: f64,
    pub g_n: f64,
    pub tv_full_period: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperplaneRow {
    pub direction: usize,
    pub offset_rad: Option<f64>,
    pub magnitude_est: Option<f64>,
    pub score: Option<f64>,
    pub n: usize,
    #[serde(rename = "K_used")]
    pub k_used: f64,
    pub normalizer: f64,
    pub note: &'static str,
}

pub const FIELD_COLUMNS: [&str; 5] = ["x_rad", "y_n", "n", "normalizer", "note"];
pub const DETECT_COLUMNS: [&str; 7] = [
    "location_rad",
    "magnitude_est",
    "score",
    "n",
    "K_used",
    "normalizer",
    "note",
];
pub const VARIATION_COLUMNS: [&str; 9] = [
    "a_rad",
    "b_rad",
    "n",
    "tv",
    "jump_mass_est",
    "K_var",
    "grid_density",
    "normalizer",
    "note",
];
pub const SWEEP_COLUMNS: [&str; 7] = [
    "n",
    "probe_x",
    "conj_partial_sum",
    "y_n",
    "g_n",
    "tv_full_period",
    "note",
];
pub const HYPERPLANE_COLUMNS: [&str; 8] = [
    "direction",
    "offset_rad",
    "magnitude_est",
    "score",
    "n",
    "K_used",
    "normalizer",
    "note",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Field(Vec<FieldRow>),
    Detect(Vec<DetectRow>),
    Variation(Vec<VariationRow>),
    Sweep(Vec<SweepRow>),
    Hyperplanes(Vec<HyperplaneRow>),
}

impl Report {
    pub fn len(&self) -> usize {
        match self {
            Report::Field(r) => r.len(),
            Report::Detect(r) => r.len(),
            Report::Variation(r) => r.len(),
            Report::Sweep(r) => r.len(),
            Report::Hyperplanes(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), RunError> {
        match self {
            Report::Field(r) => write_rows(&FIELD_COLUMNS, r, format, out),
            Report::Detect(r) => write_rows(&DETECT_COLUMNS, r, format, out),
            Report::Variation(r) => write_rows(&VARIATION_COLUMNS, r, format, out),
            Report::Sweep(r) => write_rows(&SWEEP_COLUMNS, r, format, out),
            Report::Hyperplanes(r) => write_rows(&HYPERPLANE_COLUMNS, r, format, out),
        }
    }

    pub fn to_bytes(&self, format: Format) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        buf
    }
}

fn io_error(e: impl std::fmt::Display) -> RunError {
    RunError::input(format!("cannot write output: {e}"))
}

fn write_rows<R: Serialize, W: Write>(
    columns: &[&str],
    rows: &[R],
    format: Format,
    mut out: W,
) -> Result<(), RunError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record(columns).map_err(io_error)?;
            for row in rows {
                w.serialize(row).map_err(io_error)?;
            }
            w.flush().map_err(io_error)
        }
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut out, row).map_err(io_error)?;
                out.write_all(b"\n").map_err(io_error)?;
            }
            out.flush().map_err(io_error)
        }
    }
}

/// Executes a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<Report, RunError> {
    match cfg.command {
        Command::Analyze => analyze(cfg),
        Command::Detect => detect(cfg),
        Command::Variation => variation(cfg),
        Command::Sweep => sweep(cfg),
        Command::Detect2d => detect2d(cfg),
    }
}

fn order(cfg: &RunConfig) -> usize {
    cfg.orders[0]
}

fn analyze(cfg: &RunConfig) -> Result<Report, RunError> {
    let n = order(cfg);
    let coeffs = load_coefficients(&cfg.source, n)?;
    let m = cfg.grid.unwrap_or_else(|| default_grid(n));
    let field = y_n_field(&coeffs, n, m)?;
    let tag = note(field.normalizer);
    Ok(Report::Field(
        field
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| FieldRow {
                x_rad: field.x(i),
                y_n: v,
                n,
                normalizer: field.normalizer,
                note: tag,
            })
            .collect(),
    ))
}

fn detect(cfg: &RunConfig) -> Result<Report, RunError> {
    let n = order(cfg);
    let coeffs = load_coefficients(&cfg.source, n)?;
    let cal = calibrate_k(n)?;
    let opts = DetectOptions {
        threshold_ratio: cfg.threshold,
        grid_size: cfg.grid,
        estimator: cfg.estimator,
        ..Default::default()
    };
    let report = detect_jumps_with(&coeffs, n, &opts, &cal)?;
    if report.normalizer == 0.0 {
        return Ok(Report::Detect(vec![DetectRow {
            location_rad: None,
            magnitude_est: None,
            score: None,
            n,
            k_used: report.k_used,
            normalizer: 0.0,
            note: DEGENERATE_NOTE,
        }]));
    }
    Ok(Report::Detect(
        report
            .entries
            .iter()
            .map(|e| DetectRow {
                location_rad: Some(e.location),
                magnitude_est: Some(e.magnitude),
                score: Some(e.score),
                n,
                k_used: report.k_used,
                normalizer: report.normalizer,
                note: "",
            })
            .collect(),
    ))
}

fn variation(cfg: &RunConfig) -> Result<Report, RunError> {
    let n = order(cfg);
    let (a, b) = cfg.interval.expect("validated");
    let coeffs = load_coefficients(&cfg.source, n)?;
    let density = cfg.grid.unwrap_or_else(|| {
        let needed = (GRID_OVERSAMPLING * n) as f64 * std::f64::consts::TAU / (b - a);
        (needed.ceil() as usize + 1).next_power_of_two()
    });
    let v = interval_variation(&coeffs, n, a, b, density)?;
    let cal = calibrate_variation_k(n)?;
    Ok(Report::Variation(vec![VariationRow {
        a_rad: a,
        b_rad: b,
        n,
        tv: v.value,
        jump_mass_est: v.jump_mass(&cal),
        k_var: cal.k,
        grid_density: density,
        normalizer: v.normalizer,
        note: note(v.normalizer),
    }]))
}

fn sweep(cfg: &RunConfig) -> Result<Report, RunError> {
    let top = *cfg.orders.iter().max().expect("non-empty");
    let coeffs = load_coefficients(&cfg.source, top)?;
    let mut rows = Vec::with_capacity(cfg.orders.len() * cfg.probes.len());
    for &n in &cfg.orders {
        let m = cfg.grid.unwrap_or_else(|| default_grid(n));
        let tv = cyclic_variation(&y_n_field(&coeffs, n, m)?.values);
        let g = coefficient_mass(&coeffs, n)?;
        let tag = note(normalizer(&coeffs, n)?);
        for &x in &cfg.probes {
            rows.push(SweepRow {
                n,
                probe_x: x,
                conj_partial_sum: conjugate_partial_sum(&coeffs, n, x)?,
                y_n: y_n(&coeffs, n, x)?,
                g_n: g,
                tv_full_period: tv,
                note: tag,
            });
        }
    }
    Ok(Report::Sweep(rows))
}

fn detect2d(cfg: &RunConfig) -> Result<Report, RunError> {
    let n = order(cfg);
    let crate::config::Source::Signal(name) = &cfg.source else {
        return Err(RunError::config("detect2d reads --signal only"));
    };
    let field = load_field(name)?;
    let coeffs = coefficients_2d(&field, n);
    let cal = calibrate_k_2d(n)?;
    let mut rows = vec![];
    for &j in &cfg.directions {
        let report = detect_hyperplanes(&coeffs, j, n, cfg.threshold, &cal)?;
        if report.normalizer == 0.0 {
            rows.push(HyperplaneRow {
                direction: j.index(),
                offset_rad: None,
                magnitude_est: None,
                score: None,
                n,
                k_used: report.k_used,
                normalizer: 0.0,
                note: DEGENERATE_NOTE,
            });
            continue;
        }
        rows.extend(report.entries.iter().map(|e| HyperplaneRow {
            direction: j.index(),
            offset_rad: Some(e.offset),
            magnitude_est: Some(e.magnitude),
            score: Some(e.score),
            n,
            k_used: report.k_used,
            normalizer: report.normalizer,
            note: "",
        }));
    }
    Ok(Report::Hyperplanes(rows))
}
