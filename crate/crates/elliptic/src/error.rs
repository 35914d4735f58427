use btchar_building::BuildingError;
use btchar_padic::PadicError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("element is not elliptic regular")]
    NotElliptic,
    #[error("element is not minimal over F")]
    NotMinimal,
    #[error("undecided at the current precision; raise the precision")]
    Indeterminate,
    #[error("fixed cells reach distance {reach} in a patch of radius {radius}; enlarge the patch")]
    PatchTooSmall { reach: usize, radius: usize },
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
}

pub type Result<T> = std::result::Result<T, EllipticError>;
