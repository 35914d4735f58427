use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("polynomial is not irreducible (certified factorization)")]
    NotIrreducible,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("indeterminate at the current precision; raise the precision")]
    Indeterminate,
    #[error("element has negative valuation")]
    NegativeValuation,
    #[error("division by an element that is not certified nonzero")]
    DivisionByZero,
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
}

pub type Result<T> = std::result::Result<T, PadicError>;
