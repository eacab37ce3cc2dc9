use thiserror::Error;

use crate::expr::ParseError;

/// Errors from ring construction, arithmetic preconditions and drivers.
///
/// Zero divisors met during an algorithm are not errors: they are reported
/// through [`crate::ZeroDivisorReport`] (mod p) and
/// [`crate::ZeroDivisorChar0`] (characteristic 0).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension {level} is not monic")]
    NotMonic { level: usize },
    #[error("extension {level} has degree 0")]
    ConstantExtension { level: usize },
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("divisor is not monic")]
    NotMonicDivisor,
    #[error("extension {level} involves a later variable")]
    LaterVariable { level: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} divides an extension denominator")]
    ExtensionDenominator(u64),
    #[error("not reducible modulo {0}: a denominator vanishes")]
    NotReducible(u64),
    #[error("expected an element of the coefficient field")]
    NotScalar,
    #[error("expected integer coefficients")]
    NotIntegral,
    #[error("leading coefficient is not rational")]
    NonRationalLeadingCoefficient,
    #[error("both inputs are zero")]
    BothZero,
    #[error("prime {0} already used in the accumulator")]
    RepeatedPrime(u64),
    #[error("image shape does not match the accumulator")]
    ShapeMismatch,
    #[error("no unused primes of {0} bits remain")]
    PrimesExhausted(u32),
    #[error("prime bit length {0} out of range")]
    PrimeBits(u32),
    #[error("gave up after {0} primes")]
    PrimeBudget(usize),
    #[error("deadline exceeded")]
    Timeout,
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
