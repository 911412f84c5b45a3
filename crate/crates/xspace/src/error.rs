use rowcol_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum XSpaceError {
    #[error("weight {value} at index {index} is outside [0, 1]")]
    WeightRange { index: u64, value: f64 },
    #[error("index {index} is outside the materialized range (available: {available:?})")]
    IndexRange { index: u64, available: Option<u64> },
    #[error("invalid tail rule: {0}")]
    Rule(String),
    #[error("flag check failed: {0}")]
    Flag(String),
    #[error("invalid element: {0}")]
    Element(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
