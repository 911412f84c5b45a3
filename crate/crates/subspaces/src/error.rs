use rowcol_cbnorm::CbNormError;
use rowcol_linalg::LinalgError;
use rowcol_xspace::XSpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("invalid frame: {0}")]
    Frame(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index {index} exceeds the dimension {available}")]
    Range { index: usize, available: usize },
    #[error("schedule violated: {0}")]
    Schedule(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    XSpace(#[from] XSpaceError),
    #[error(transparent)]
    CbNorm(#[from] CbNormError),
}
