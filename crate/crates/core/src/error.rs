use thiserror::Error;

/// Errors produced by the spectral, signal, and detector routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("order {order} exceeds coefficient range {max_index}")]
    OutOfRange { order: usize, max_index: usize },

    #[error("invalid order {0}: Y_n requires n >= 2")]
    InvalidOrder(usize),

    #[error("{samples} samples cannot resolve {max_index} harmonics without aliasing (need at least {needed})")]
    Aliasing {
        samples: usize,
        max_index: usize,
        needed: usize,
    },

    #[error("grid of {grid} points is too coarse for order {order} (need at least {needed})")]
    GridTooCoarse {
        grid: usize,
        order: usize,
        needed: usize,
    },

    #[error("imaginary residue {0:e} exceeds tolerance for a real-signal coefficient set")]
    ImaginaryResidue(f64),

    #[error("invalid interval ({a}, {b})")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("signal is not separable: {0}")]
    NonSeparable(String),

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("failed to parse signal file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
