use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different contexts")]
    ContextMismatch,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("xgcd of two zero polynomials")]
    BothZero,
    #[error("modulus must have degree at least 1")]
    BadModulus,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is constant")]
    ConstantInput,
    #[error("gcd(n, p) = {0}, expected 1")]
    GcdViolation(u64),
    #[error("s must be at least 1")]
    SZero,
    #[error("index {index} out of range (r = {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected {expected} parts, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("range error: {0}")]
    RangeError(String),
    #[error("invalid ideal spec: {0}")]
    InvalidSpec(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("lambda^2 != 1, no reciprocal pairing on the factors")]
    NotSelfPairedLambda,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
