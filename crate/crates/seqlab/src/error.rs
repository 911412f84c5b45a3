use rowcol_linalg::LinalgError;
use rowcol_xspace::XSpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeqError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a member of the sequence space: {0}")]
    Membership(String),
    #[error("block construction failed: {0}")]
    Construction(String),
    #[error("index {index} is outside the materialized range ({available})")]
    Range { index: u64, available: u64 },
    #[error(transparent)]
    XSpace(#[from] XSpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
