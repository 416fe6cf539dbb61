use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {0} is not on the curve")]
    OffCurve(String),

    /// A prime outside the analysis support carries a nonzero exponent mod 3.
    #[error("support violation: prime {prime} has nonzero exponent mod 3 outside the support")]
    SupportViolation { prime: BigInt },

    /// The point (0, -9n): the primitive ratio has a zero denominator.
    #[error("dual-kernel point: primitive ratio is undefined")]
    DualKernelPoint,

    #[error("parse error: {0}")]
    Parse(String),

    /// Broken postcondition. Reaching this is a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
