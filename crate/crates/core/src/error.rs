use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WigxError {
    #[error("operator is not Hermitian (relative residual {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("dimension mismatch: expected side {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid polynomial order {0}")]
    InvalidOrder(i64),
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("root isolation is ill-conditioned: {0}")]
    ConditioningFailure(String),
    #[error("polynomial is negative on the half-line (value {value:.3e} at t = {at:.6})")]
    NotNonnegative { at: f64, value: f64 },
    #[error("Wigner value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("operator is not phase-invariant")]
    NotPhaseInvariant,
    #[error("output trace vanishes ({trace:.3e})")]
    VanishingTrace { trace: f64 },
    #[error("truncation tail weight {tail:.3e} exceeds bound {bound:.3e}")]
    TruncationWarning { tail: f64, bound: f64 },
    #[error("invalid extreme spec: {0}")]
    InvalidSpec(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, WigxError>;

impl From<std::io::Error> for WigxError {
    fn from(e: std::io::Error) -> Self {
        WigxError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for WigxError {
    fn from(e: serde_json::Error) -> Self {
        WigxError::Parse(e.to_string())
    }
}
