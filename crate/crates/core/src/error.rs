use thiserror::Error;

use crate::pair::PairDiagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not Hermitian")]
    NotHermitian,

    #[error("not non-negative")]
    NotNonNegative,

    #[error("A not non-negative")]
    PairBaseNotNonNegative,

    #[error("not a positive pair: {0}")]
    NotPositivePair(PairDiagnostic),

    #[error("outside ran R∗")]
    OutsideRange,

    #[error("A ≰ α²D")]
    OrderViolated,

    #[error("square roots unsupported on exact backend")]
    ExactSquareRoot,

    #[error("factors disagree: {0}")]
    FactorMismatch(String),

    #[error("chain not decreasing at position {0}")]
    NotDecreasing(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}
