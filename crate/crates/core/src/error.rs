use thiserror::Error;

/// Errors produced by the entropy level-set engines.
///
/// The variants are grouped by the exit-code contract of the command-line
/// front end: input problems map to [`ErrorClass::Validation`], everything
/// that goes wrong while computing maps to [`ErrorClass::Numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("branch point reached: {0}")]
    BranchPoint(String),

    #[error("tracking error: {0}")]
    Tracking(String),

    #[error("step underflow near a singularity at path parameter {param:.6e}")]
    StepUnderflow { param: f64 },

    #[error("inconsistent logarithm lift: {0}")]
    InconsistentLift(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Validation(_) | Error::Domain(_) | Error::Unsupported(_) => {
                ErrorClass::Validation
            }
            _ => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
