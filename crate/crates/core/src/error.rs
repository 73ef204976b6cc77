use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum RbError {
    /// Operand dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The requested size exceeds what the dense backend supports.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numeric argument lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested computation is not defined for this noise mode.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// Malformed textual input (hex elements, JSON configs, CSV rows).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RbError {
    /// Short machine-readable tag used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            RbError::Shape(_) => "shape",
            RbError::Capacity(_) => "capacity",
            RbError::Domain(_) => "domain",
            RbError::Contract(_) => "contract",
            RbError::UnsupportedMode(_) => "unsupported_mode",
            RbError::Parse(_) => "parse",
            RbError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, RbError>;
