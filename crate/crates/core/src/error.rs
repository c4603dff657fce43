use thiserror::Error;

/// Errors raised by the decomposition toolkit.
///
/// Everything except [`DxzError::Inconsistent`], [`DxzError::Io`] and
/// [`DxzError::Json`] signals a rejected input.
#[derive(Debug, Error)]
pub enum DxzError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unitary: residual {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },
    #[error("block size {m} does not divide dimension {n}")]
    InvalidPartition { n: usize, m: usize },
    #[error("block index ({j}, {k}) outside 1..={r}")]
    BlockIndex { j: usize, k: usize, r: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A computed quantity contradicts a structural guarantee of its input.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("malformed CMAT-JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = DxzError> = std::result::Result<T, E>;
