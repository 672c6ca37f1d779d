//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degrees k and n must be positive")]
    DegenerateDegree,
    #[error("tower parameters overflow the supported range")]
    TowerTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different tower levels")]
    LevelMismatch,
    #[error("enumeration of {size} elements exceeds the configured bound {bound}")]
    BoundExceeded { size: u128, bound: u64 },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial has no inverse modulo the given modulus (not coprime)")]
    NotCoprime,
    #[error("duplicate interpolation node")]
    DuplicateNode,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not a monic divisor of x^n - 1")]
    NotADivisor,
    #[error("element is not a nonzero n-th root of unity")]
    NotARoot,
    #[error("kernel-containment hypothesis violated")]
    HypothesisViolated,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("k does not map the relevant image set into the nonzero base-field elements")]
    KNotUnitValued,
    #[error("a must be a nonzero n-th root of unity in the base field")]
    InvalidA,
    #[error("delta must be nonzero and satisfy delta^q = a*delta")]
    InvalidDelta,
    #[error("no solution exists")]
    NoSolution,
    #[error("polynomial is not a permutation of the target field")]
    NotAPermutation,
    #[error("base polynomial is not a permutation of the base field")]
    BaseNotPp,
    #[error("base polynomial is not a complete permutation of the base field")]
    BaseNotCpp,
    #[error("h is not coprime to the required divisor of x^n - 1")]
    HNotCoprime,
    #[error("h(h+1) is not coprime to the required divisor of x^n - 1")]
    HConditionFailed,
    #[error("rejection-sampling cap exceeded while drawing a unit-valued k")]
    RejectionCapExceeded,
    #[error("inversion is only defined for divisors of the form (x^n-1)/(x-a)")]
    UnsupportedDivisor,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error JSON and the FFI
    /// status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NonPrime",
            Error::DegenerateDegree => "DegenerateDegree",
            Error::TowerTooLarge => "TowerTooLarge",
            Error::DivisionByZero => "DivisionByZero",
            Error::LevelMismatch => "LevelMismatch",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::BothZero => "BothZero",
            Error::NotCoprime => "NotCoprime",
            Error::DuplicateNode => "DuplicateNode",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotADivisor => "NotADivisor",
            Error::NotARoot => "NotARoot",
            Error::HypothesisViolated => "HypothesisViolated",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::KNotUnitValued => "KNotUnitValued",
            Error::InvalidA => "InvalidA",
            Error::InvalidDelta => "InvalidDelta",
            Error::NoSolution => "NoSolution",
            Error::NotAPermutation => "NotAPermutation",
            Error::BaseNotPp => "BaseNotPp",
            Error::BaseNotCpp => "BaseNotCpp",
            Error::HNotCoprime => "HNotCoprime",
            Error::HConditionFailed => "HConditionFailed",
            Error::RejectionCapExceeded => "RejectionCapExceeded",
            Error::UnsupportedDivisor => "UnsupportedDivisor",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Json(_) => "Json",
        }
    }
}
