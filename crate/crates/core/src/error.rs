use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid arm: {0}")]
    InvalidArm(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget {budget} is too small: initial pulls need {required}")]
    BudgetTooSmall { budget: u64, required: u64 },

    #[error("budget exhausted after {0} pulls")]
    BudgetExhausted(u64),

    #[error("active set is empty")]
    EmptyActiveSet,

    #[error("log argument T*eps = {0} is not greater than 1")]
    NonPositiveLogArgument(f64),

    #[error("arm {0} sits exactly on the threshold, complexity is infinite")]
    InfiniteComplexity(usize),

    #[error("b = {b} is below the admissible minimum sqrt(e/T) = {min}")]
    DomainError { b: f64, min: f64 },

    #[error("unknown experiment {0}, expected 1..=6")]
    UnknownExperiment(u32),
}
