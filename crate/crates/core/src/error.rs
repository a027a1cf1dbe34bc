use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("family mismatch: expected element of {expected}, got {got}")]
    FamilyMismatch { expected: String, got: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("word letter {letter} out of range for tuple of length {len}")]
    LetterOutOfRange { letter: u32, len: usize },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("classification violation: {0}")]
    ClassificationViolation(String),

    #[error("unknown builder: {0}")]
    UnknownBuilder(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unbound variable x{0}")]
    UnboundVariable(u32),

    #[error("search exhausted: {0}")]
    SearchFailure(String),

    #[error("invalid endomorphism: {0}")]
    InvalidEndo(String),

    #[error("stagewise approximation violates S2 \u{2286} S1 at stage {0}")]
    ApproxViolation(u64),

    #[error("mismatched inputs: {0}")]
    MismatchedInputs(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
