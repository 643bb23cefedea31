use std::path::PathBuf;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left:?}, right is {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("index {index} out of range for {axis} of length {len}")]
    IndexOutOfRange {
        index: usize,
        len: usize,
        axis: &'static str,
    },

    #[error("invalid matrix data: {0}")]
    InvalidData(String),

    #[error("non-finite value {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("singular cross block")]
    SingularCrossBlock,

    #[error("block exceeds row count: b = {b}, rows = {rows}")]
    BlockExceedsRows { b: usize, rows: usize },

    #[error("block too small for requested alpha: c = {c} must exceed -4 ln(alpha) = {min:.4}")]
    BlockTooSmallForAlpha { c: usize, min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not implemented")]
    NotImplemented(&'static str),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
