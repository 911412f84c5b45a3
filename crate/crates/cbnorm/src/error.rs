use rowcol_linalg::LinalgError;
use rowcol_xspace::XSpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CbNormError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("exact integer overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    XSpace(#[from] XSpaceError),
}
