//! Rank-adaptive CUR approximation from a single recycled Gaussian sketch.
//!
//! [`itercur::iterative_cur`] grows `A ≈ C U R` a block of rows and columns at
//! a time, choosing each block by pivoting on a sketch of the current
//! residual, and stops once the sketched relative residual drops below a
//! tolerance. [`baselines`] holds reference methods and [`testmat`] the
//! synthetic inputs used to compare them.

pub mod baselines;
pub mod error;
pub mod itercur;
pub mod matcore;
pub mod select;
pub mod sketch;
pub mod testmat;

pub use error::{Error, Result};
pub use itercur::{iterative_cur, RunStatus, RunTrace, StoppingConfig};
pub use matcore::{CsrMatrix, CurFactors, DenseMatrix, MatrixHandle};
pub use select::{SelectionMethod, SelectionTag};
