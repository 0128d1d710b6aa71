//! Detection and quantification of jump discontinuities of 2π-periodic
//! piecewise-smooth signals, working directly from Fourier coefficients.
//!
//! The central object is the coefficient-weighted conjugate functional `Y_n`
//! (see [`detector`]); [`torus`] carries the same construction to the
//! two-dimensional torus, where it detects axis-aligned jump lines.

pub mod coeffs;
pub mod detector;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod series;
pub mod signal;
pub mod torus;

pub use coeffs::{coefficients_analytic, coefficients_from_samples, sample_signal, CoefficientSet};
pub use detector::{
    calibrate_k, calibrate_variation_k, detect_jumps, detect_jumps_with, interval_variation,
    lukacs_jump_estimate, y_n, y_n_field, y_n_field_with, CalibrationResult, DetectOptions,
    DetectedJump, Estimator, FieldOptions, JumpReport, VariationEstimate, YnField,
};
pub use error::{Error, Result};
pub use grid::{Execution, Strategy};
pub use kernel::{conjugate_dirichlet, dirichlet};
pub use series::{coefficient_mass, conjugate_partial_sum, partial_sum};
pub use signal::{make_pulse, make_staircase, total_variation, Jump, JumpSet, SignalSpec};
