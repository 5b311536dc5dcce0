use thiserror::Error;

/// Errors raised by the solver stack.
#[derive(Debug, Error)]
pub enum QhjError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("unsupported expansion at infinity: {0}")]
    UnsupportedExpansion(String),

    #[error("no admissible residue assignment: {0}")]
    NoAdmissibleAssignment(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("grid too coarse: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("inconsistent model data: {0}")]
    Inconsistent(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QhjError>;

pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> QhjError {
    QhjError::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}
