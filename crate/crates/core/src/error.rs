use thiserror::Error;

/// Errors raised by the exact and float kernels and everything built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two quadratic-field values with different radicands were combined.
    #[error("radicand mismatch: cannot combine values over sqrt({left}) and sqrt({right})")]
    RadicandMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    /// Series division or inversion by a series whose constant term vanishes.
    #[error("singular series: constant term of the divisor is zero")]
    SingularSeries,

    /// A family parameter makes one of the linear coefficient equations degenerate.
    #[error("singular parameter: {0}")]
    SingularParameter(String),

    /// A documented precondition of an operation does not hold.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
