use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(f64),

    /// Both components of a direction vector vanished, so no angle exists.
    #[error("direction undefined: both components are zero")]
    UndefinedDirection,

    #[error("characteristic function vanishes at frequency {0}")]
    IllPosedWeight(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("characteristic function is not summable: {0}")]
    NotSummable(String),

    #[error("empty {0} grid: sample size too small for this noise model")]
    EmptyGrid(&'static str),

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("{failed} of {reps} replications failed, above the 5% cap")]
    TooManyFailures { failed: usize, reps: usize },

    #[error("csv line {line}: {reason}")]
    Csv { line: u64, reason: String },

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("expected a positive finite number, got {value}"),
        })
    }
}

/// Coarse failure class, used by front-ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters or configuration.
    Usage,
    /// Malformed or unusable input data, or too many failed replications.
    Data,
    /// A computation could not be carried out.
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter { .. } | Error::EmptyGrid(_) => ErrorClass::Usage,
            Error::InvalidData(_) | Error::Csv { .. } | Error::Io(_) | Error::TooManyFailures { .. } => ErrorClass::Data,
            Error::NonFinite(_)
            | Error::UndefinedDirection
            | Error::IllPosedWeight(_)
            | Error::NotSummable(_)
            | Error::Quadrature { .. } => ErrorClass::Numerical,
        }
    }
}
