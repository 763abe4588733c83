use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("resource cap exceeded: {what} needs {needed}, budget is {budget}")]
    ResourceCap {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("could not certify {what} below the precision cap of {cap} bits")]
    RefinementCap { what: String, cap: u32 },

    #[error("coefficients must be chosen in order: expected n = {expected}, got n = {got}")]
    Ordering { expected: usize, got: usize },

    #[error("index {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },

    #[error("unsupported degree {degree}: {context}")]
    UnsupportedDegree { degree: usize, context: &'static str },

    #[error("dyadic exponent range exceeded while computing {0}")]
    ExponentOverflow(&'static str),

    #[error("division by a ball that contains zero")]
    DivisionByZero,

    #[error("logarithm of a ball that is not strictly positive")]
    LogNonPositive,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("format version mismatch: found {found}, expected {expected}")]
    VersionMismatch { found: String, expected: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
