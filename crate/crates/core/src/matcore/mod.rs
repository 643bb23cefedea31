//! Matrix storage, gathers, products, norms and the factored CUR core.

mod cur;
mod dense;
mod handle;
pub(crate) mod householder;
pub(crate) mod par;
mod pinv;
mod sparse;

pub use cur::CurFactors;
pub use dense::DenseMatrix;
pub use handle::{fro_norm, gather_cols, gather_rows, matmul, MatrixHandle};
pub use par::{is_deterministic, set_deterministic};
pub use pinv::{apply_pinv_left, apply_pinv_right, build_pinv, default_pinv_tol, FactoredPinv};
pub use sparse::CsrMatrix;

/// Factorization used for the cross-block core.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoreFactorization {
    /// Pivoted QR with complete orthogonal decomposition.
    #[default]
    Qr,
    /// LU of the cross block. Reserved; building it returns an error.
    Lu,
}
