use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certification failed on {interval}: max error {max_error:e} exceeds tolerance {tolerance:e}")]
    CertificationFailed {
        interval: String,
        max_error: f64,
        tolerance: f64,
    },

    #[error("separability violated: delta = {delta}, rho = {rho} (delta - 2 rho must be positive)")]
    SeparabilityViolation { delta: f64, rho: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not in the domain: {0}")]
    NotInDomain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sampling budget of {attempts} attempts exhausted with {accepted} of {wanted} points accepted")]
    BudgetExhausted {
        attempts: usize,
        accepted: usize,
        wanted: usize,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::CertificationFailed { .. } => "certification_failure",
            Error::SeparabilityViolation { .. } => "separability_violation",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotInDomain(_) => "not_in_domain",
            Error::Empty(_) => "empty_input",
            Error::BudgetExhausted { .. } => "budget_exhausted",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Usage(_) => "usage",
            Error::Malformed(_) => "malformed_input",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

impl Error {
    /// Process exit code: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
