use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: u64, n: u64 },
    #[error("set is all of Z_{0}")]
    FullSet(u64),
    #[error("set is empty")]
    EmptySet,
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("{what}: gcd({a}, {b}) != 1")]
    NotCoprime { what: &'static str, a: u64, b: u64 },
    #[error("expected {expected} elements, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("dimension {dim} out of range (max {max})")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("modulus {n} too large for this operation (limit {limit})")]
    TooLarge { n: u64, limit: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field has no primitive root of unity")]
    NoRootOfUnity,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("field characteristic {char} divides n = {n}")]
    BadCharacteristic { char: u64, n: u64 },
    #[error("kernel sum {sum} is not divisible by {divisor}")]
    DivisibilityViolation { sum: u64, divisor: u64 },
    #[error("matrix is nonsingular; kernel is trivial")]
    TrivialKernel,
    #[error("{0} is not a live facet")]
    NotAFacet(String),
    #[error("({0}) is not a free pair")]
    NotFree(String),
    #[error("index set is not an arithmetic progression")]
    NotAP,
    #[error("index set is an arithmetic progression")]
    IsAP,
    #[error("collapse got stuck unexpectedly: {0}")]
    StuckUnexpectedly(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that indicate a bug or a violated theorem rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::DivisibilityViolation { .. }
                | Error::StuckUnexpectedly(_)
                | Error::AssertionFailed(_)
        )
    }
}
