use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not a prime in [2, 31]")]
    NotPrime(u32),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {d} not below characteristic {p} ({d}! is not invertible)")]
    DegreeVsCharacteristic { d: usize, p: u32 },
    #[error("enumeration budget exceeded: need {required} points, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
