use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    /// The function being maximized is flat to within round-off.
    #[error("curve is numerically flat (spread {spread:e})")]
    DegenerateCurve { spread: f64 },

    #[error("curve has separated maxima near x = {first} and x = {second}")]
    NonUnimodal { first: f64, second: f64 },

    #[error("target level {target} is never crossed by the curve")]
    NotFound { target: f64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("realization with seed {seed:#018x} failed: {source}")]
    Realization {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True when the failure is caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Validation(_) => true,
            Error::Realization { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}
