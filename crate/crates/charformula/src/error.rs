use btchar_building::BuildingError;
use btchar_elliptic::EllipticError;
use btchar_finite_gl::FglError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    FiniteGl(#[from] FglError),
    #[error("invalid discrete-series datum: {0}")]
    InvalidSpec(String),
    #[error("ρ₀ = {0} is not cuspidal")]
    NotCuspidal(String),
    #[error("element does not stabilize the simplex")]
    NotFixed,
    #[error("the simple formula needs an element minimal over F")]
    MinimalityRequired,
    #[error("element lies in a nontrivial Π-coset of its stabilizer and no extended action is configured")]
    ExtendedActionNeeded,
    #[error("element is not elliptic regular")]
    NotElliptic,
    #[error("level {0} evaluation needs externally supplied κ-traces")]
    UnsupportedLevel(u32),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("orbital sums did not stabilize: {0}")]
    NotStabilized(String),
    #[error("truncation at radius {radius} precludes a verdict: {reason}")]
    BoundaryContamination { radius: usize, reason: String },
    #[error("internal disagreement: {0}")]
    Disagreement(String),
}

impl CharError {
    /// `Building`/`Elliptic` precision failures, which a caller can cure by raising precision.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            CharError::Building(BuildingError::PrecisionInsufficient(_))
                | CharError::Elliptic(EllipticError::Indeterminate)
                | CharError::Elliptic(EllipticError::Building(BuildingError::PrecisionInsufficient(_)))
        )
    }
}

pub type Result<T> = std::result::Result<T, CharError>;
