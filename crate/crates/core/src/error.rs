use alloc::string::String;
use core::fmt;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violates a documented precondition.
    InvalidArgument(String),
    /// A phase-space state, coordinate list or parameter list has the wrong length.
    DimensionMismatch { expected: usize, found: usize },
    /// The operation is only defined for a restricted class of chains.
    Unsupported(&'static str),
    /// An iterative numerical method failed to converge.
    NumericalFailure { method: &'static str, detail: String },
    /// Exact integer coefficients no longer fit in the chosen representation.
    CoefficientOverflow { degree: usize, max_degree: usize },
    /// The requested mode frequency lies outside the pseudo-bound window.
    NoPseudoBoundState { omega_sq: f64, window: (f64, f64) },
    /// Fixed-step integration would be unstable or inaccurate at the requested step.
    StepTooLarge { dt: f64, max_frequency: f64, suggested_dt: f64 },
    /// The finite-difference time step violates the Courant condition.
    CourantViolation { courant: f64, limit: f64 },
    /// A bisection predicate still holds at the upper end of its search range.
    RangeTooSmall { upper: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NumericalFailure { method, detail } => {
                write!(f, "numerical failure in {method}: {detail}")
            }
            Error::CoefficientOverflow { degree, max_degree } => write!(
                f,
                "characteristic polynomial of degree {degree} overflows i128 coefficients (max degree {max_degree})"
            ),
            Error::NoPseudoBoundState { omega_sq, window } => write!(
                f,
                "no pseudo-bound state: Omega^2 = {omega_sq} must lie in ({}, {}) so that a^2 > 0 and b^2 > 0",
                window.0, window.1
            ),
            Error::StepTooLarge { dt, max_frequency, suggested_dt } => write!(
                f,
                "time step {dt} too large for max |lambda| = {max_frequency}; use dt <= {suggested_dt}"
            ),
            Error::CourantViolation { courant, limit } => {
                write!(f, "Courant number {courant} exceeds {limit}")
            }
            Error::RangeTooSmall { upper } => {
                write!(f, "predicate still holds at the upper search bound {upper}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
