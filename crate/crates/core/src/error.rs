use thiserror::Error;

use crate::exactlin::LinError;
use crate::formal::FormalError;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VlaError {
    #[error(transparent)]
    Linear(#[from] LinError),
    #[error(transparent)]
    Formal(#[from] FormalError),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    /// A computation needed states beyond the truncation that was built.
    #[error("degree window exceeded: degree {required} needed but the basis stops at {available}")]
    WindowExceeded { required: i64, available: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A consistency check that holds by theorem failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, VlaError>;
