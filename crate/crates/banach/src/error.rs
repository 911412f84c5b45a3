use rowcol_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BanachError {
    #[error("invalid frame: {0}")]
    Frame(String),
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("canonical form unavailable: {0}")]
    Canonical(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
