use btchar_building::BuildingError;
use btchar_charformula::CharError;
use btchar_elliptic::EllipticError;
use btchar_finite_gl::FglError;
use btchar_padic::PadicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario error: {0}")]
    Schema(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("indeterminate at the current precision: {0}; raise --precision")]
    Indeterminate(String),
    #[error("truncation too tight: {0}; raise --radius")]
    Truncation(String),
    #[error("internal oracle disagreement (a bug): {0}")]
    Disagreement(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Indeterminate(_) | CliError::Truncation(_) => 4,
            CliError::Disagreement(_) => 5,
            CliError::Io(_) | CliError::Compute(_) => 1,
        }
    }
}

impl From<FglError> for CliError {
    fn from(e: FglError) -> Self {
        match e {
            FglError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            FglError::NotPrimePower(_) | FglError::UnknownCharacter(_) => CliError::Schema(e.to_string()),
            FglError::Io(m) => CliError::Io(m),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::InvalidField(_) | PadicError::NotMonic => CliError::Schema(e.to_string()),
            PadicError::PrecisionInsufficient(_) | PadicError::Indeterminate => CliError::Indeterminate(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<BuildingError> for CliError {
    fn from(e: BuildingError) -> Self {
        match e {
            BuildingError::Padic(p) => p.into(),
            BuildingError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            BuildingError::PrecisionInsufficient(_) => CliError::Indeterminate(e.to_string()),
            BuildingError::Unsupported(_) | BuildingError::DimensionMismatch(_) => CliError::Schema(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<EllipticError> for CliError {
    fn from(e: EllipticError) -> Self {
        match e {
            EllipticError::Building(b) => b.into(),
            EllipticError::Padic(p) => p.into(),
            EllipticError::Indeterminate => CliError::Indeterminate(e.to_string()),
            EllipticError::PatchTooSmall { .. } => CliError::Truncation(e.to_string()),
            EllipticError::OracleDisagreement(_) => CliError::Disagreement(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::Building(b) => b.into(),
            CharError::Elliptic(x) => x.into(),
            CharError::FiniteGl(f) => f.into(),
            CharError::InvalidSpec(_) | CharError::NotCuspidal(_) | CharError::UnsupportedShape(_) => {
                CliError::Schema(e.to_string())
            }
            CharError::NotStabilized(_) | CharError::BoundaryContamination { .. } => CliError::Truncation(e.to_string()),
            CharError::Disagreement(_) => CliError::Disagreement(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
