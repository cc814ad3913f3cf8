//! Error types shared across the crate.

use alloc::string::String;
use core::fmt;

/// Parse failure with the byte offset of the offending token and the set of
/// token classes that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: &'static str,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset, self.expected, self.found
        )
    }
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Expression text could not be parsed.
    Parse(ParseError),
    /// A function left its mathematical domain during evaluation
    /// (log of a non-positive number, even root of a negative, ...).
    EvalDomain { what: &'static str, at: f64 },
    /// A field or profile was queried where it is not valid, e.g. a
    /// conformal factor below the degeneracy threshold.
    DomainViolation(String),
    /// Metric determinant magnitude at or below the invertibility threshold.
    DegenerateMetric { det: f64 },
    /// Adaptive quadrature could not reach the requested tolerance within
    /// the node budget.
    QuadratureFailure { detail: String },
    /// Mismatched dimensions between points, fields or signatures.
    Dimension { expected: usize, got: usize },
    /// A precondition on operation inputs was violated.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "{e}"),
            Error::EvalDomain { what, at } => write!(f, "domain error: {what} at t = {at}"),
            Error::DomainViolation(msg) => write!(f, "domain violation: {msg}"),
            Error::DegenerateMetric { det } => {
                write!(f, "degenerate metric: |det| = {:e} below threshold", det.abs())
            }
            Error::QuadratureFailure { detail } => write!(f, "quadrature failure: {detail}"),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

pub type Result<T> = core::result::Result<T, Error>;
