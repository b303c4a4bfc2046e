use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported; the quadratic character needs an odd prime")]
    EvenPrime,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {q} exceeds the configured bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {0} is not a primitive element")]
    NotPrimitive(u64),
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("sequence polynomial is zero")]
    ZeroSequence,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no proper representation found for q = {0}")]
    NotFound(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
