use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix has a zero dimension ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("column {column} is linearly dependent on the previous columns (residual {residual:e})")]
    RankDeficient { column: usize, residual: f64 },
    #[error("matrix is not hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix is singular")]
    Singular,
}
