//! Exit codes and the mapping from library errors onto them.

use std::fmt;

use shorted::Error;

pub const OK: i32 = 0;
/// Not of positive type, not non-negative, or an order hypothesis fails.
pub const POSITIVITY: i32 = 2;
/// Positive type, but `σ` is indefinite.
pub const SIGMA_INDEFINITE: i32 = 3;
pub const PARSE: i32 = 64;
pub const VALIDATION: i32 = 65;
/// Internal assertion, including a failed property in `verify`.
pub const INTERNAL: i32 = 70;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(PARSE, message)
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(VALIDATION, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub fn code_for(e: &Error) -> i32 {
    match e {
        Error::NotPositivePair(_)
        | Error::PairBaseNotNonNegative
        | Error::NotNonNegative
        | Error::OrderViolated
        | Error::OutsideRange => POSITIVITY,
        Error::DimensionMismatch(_)
        | Error::NotHermitian
        | Error::ExactSquareRoot
        | Error::FactorMismatch(_)
        | Error::NotDecreasing(_)
        | Error::InvalidArgument(_) => VALIDATION,
        Error::InternalAssertion(_) => INTERNAL,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::new(code_for(&e), e.to_string())
    }
}
