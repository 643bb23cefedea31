//! Synthetic test matrices and MatrixMarket I/O.

mod generate;
mod mm;

pub use generate::{default_decay, generate, GeneratorKind, GeneratorSpec, PD_DIAGONAL_RANGE};
pub use mm::{parse_matrix_market, read_matrix_market, write_matrix_market};
