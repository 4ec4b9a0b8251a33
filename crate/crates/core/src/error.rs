use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration of {size} items exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("matrix is not regular")]
    NotRegular,
    #[error("invalid invariants (w={w}, delta={delta}) at level {level}")]
    InvalidInvariants { w: u32, delta: u32, level: u32 },
    #[error("negative coefficient in factor {factor}")]
    NegativeCoefficient { factor: usize },
    #[error("factor {factor} is identically zero")]
    ZeroFactor { factor: usize },
    #[error("polynomial has no non-constant factor")]
    DegeneratePolynomial,
    #[error("variable x{0} occurs in no factor; the series diverges for every s")]
    UnboundedVariable(usize),
    #[error("pole at s = 1")]
    Pole,
    #[error("malformed input in `{field}`: {reason}")]
    Malformed { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
