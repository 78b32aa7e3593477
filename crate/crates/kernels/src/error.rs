use rebits_core::{AccumError, FormatError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("unknown traversal order `{0}`")]
    UnknownOrder(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Accum(#[from] AccumError),
}
