use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("inadmissible psi: {0}")]
    InadmissiblePsi(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("non-finite integrand value at x = {x}")]
    NonFinite { x: f64 },

    #[error("integral diverges near x = {x}: {detail}")]
    Divergence { x: f64, detail: String },

    #[error("integrand blows up on the contour at p = {0}")]
    PoleOnContour(Complex64),

    #[error("finite-difference step underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
