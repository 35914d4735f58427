use btchar_padic::PadicError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("malformed lattice chain: {0}")]
    MalformedChain(String),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element does not lie in the parahoric subgroup")]
    ElementNotInParahoric,
    #[error("chain is not stable under o_E: {0}")]
    NotAnOEChain(String),
    #[error("enumeration budget exceeded after {reached} items (budget {budget})")]
    BudgetExceeded { reached: usize, budget: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, BuildingError>;
