use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("invalid signature: s = {s} must satisfy 0 <= s <= m = {m}")]
    InvalidSignature { m: usize, s: i64 },

    #[error("complex dimension m must be positive")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invariant `{invariant}` violated: {detail}")]
    InvariantViolation {
        invariant: &'static str,
        detail: String,
    },

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("degenerate plane (Gram rank {gram_rank})")]
    DegeneratePlane { gram_rank: usize },

    #[error("isotropic vector where a non-null one is required")]
    IsotropicVector,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pattern {pattern} is not realizable in signature (m = {m}, s = {s})")]
    Unrealizable { pattern: String, m: usize, s: usize },

    #[error("random construction failed after {attempts} attempts")]
    RetryBudgetExhausted { attempts: usize },

    #[error("no rational J-adapted orthonormal frame found for this complex structure")]
    NoRationalFrame,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("non-finite component value")]
    NonFinite,

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("hypothesis not satisfied by space parameters: {0}")]
    Hypothesis(String),
}

pub type Result<T, E = CurvatureError> = std::result::Result<T, E>;
