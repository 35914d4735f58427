use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("|GL(n, q)| = {order} exceeds the budget {budget}")]
    BudgetExceeded { order: u64, budget: u64 },
    #[error("{0} is not a supported prime power")]
    NotPrimePower(u32),
    #[error("character table computation failed: {0}")]
    DixonFailed(String),
    #[error("{0} constituents pass the genericity test; expected exactly one")]
    GenericityAmbiguous(usize),
    #[error("no character labelled {0}")]
    UnknownCharacter(String),
    #[error("invalid parabolic data: {0}")]
    InvalidParabolic(String),
    #[error("cache i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FglError>;
