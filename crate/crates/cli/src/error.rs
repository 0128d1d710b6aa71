use thiserror::Error;

/// Failure of a run, split by who has to fix it.
#[derive(Debug, Error)]
pub enum RunError {
    /// Bad flags or inconsistent parameters. Exit status 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Unreadable or malformed input. Exit status 3.
    #[error("input error: {0}")]
    Input(String),
}

impl RunError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Input(_) => 3,
        }
    }
}

impl From<conjugate_jumps::Error> for RunError {
    fn from(e: conjugate_jumps::Error) -> Self {
        use conjugate_jumps::Error as E;
        match e {
            E::OutOfRange { .. }
            | E::InvalidOrder(_)
            | E::Aliasing { .. }
            | E::GridTooCoarse { .. }
            | E::InvalidInterval { .. }
            | E::InvalidParameter(_)
            | E::TooFewValues { .. } => Self::Config(e.to_string()),
            E::ImaginaryResidue(_) | E::InvalidSignal(_) | E::NonSeparable(_) | E::Parse(_) => {
                Self::Input(e.to_string())
            }
        }
    }
}
