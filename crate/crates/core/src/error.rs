//! Error type shared by all modules.

use core::fmt;

/// Errors reported by the solver library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible interval. `min` is exclusive,
    /// `max` inclusive, matching the (1, 2]-style ranges used throughout.
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// A vector length does not match the operator or grid dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A structurally invalid argument (zero counts, too few resolutions, ...).
    InvalidArgument {
        name: &'static str,
        reason: &'static str,
    },
    /// Fewer quadrature coefficients than the requested step index needs.
    InsufficientCoefficients { needed: usize, got: usize },
    /// The scheme only supports zero initial data.
    NonZeroInitialData,
    /// The step matrix failed its SPD factorization. The matrix is the
    /// identity minus a negative-definite operator, so this signals an
    /// assembly bug, not a user error.
    IndefiniteStepMatrix,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange {
                name,
                value,
                min,
                max,
            } => write!(f, "{name} = {value} outside ({min}, {max}]"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidArgument { name, reason } => {
                write!(f, "invalid argument {name}: {reason}")
            }
            Error::InsufficientCoefficients { needed, got } => {
                write!(f, "need {needed} quadrature coefficients, have {got}")
            }
            Error::NonZeroInitialData => {
                write!(f, "nonzero initial data is not supported by this scheme")
            }
            Error::IndefiniteStepMatrix => {
                write!(
                    f,
                    "step matrix is not positive definite (scheme assembly bug)"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
