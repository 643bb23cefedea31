use crate::error::{Error, Result};
use crate::matcore::dense::DenseMatrix;
use crate::matcore::sparse::CsrMatrix;

/// A dense or CSR matrix behind one interface.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixHandle {
    Dense(DenseMatrix),
    Sparse(CsrMatrix),
}

impl From<DenseMatrix> for MatrixHandle {
    fn from(m: DenseMatrix) -> Self {
        MatrixHandle::Dense(m)
    }
}

impl From<CsrMatrix> for MatrixHandle {
    fn from(m: CsrMatrix) -> Self {
        MatrixHandle::Sparse(m)
    }
}

impl MatrixHandle {
    pub fn rows(&self) -> usize {
        match self {
            MatrixHandle::Dense(d) => d.rows(),
            MatrixHandle::Sparse(s) => s.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixHandle::Dense(d) => d.cols(),
            MatrixHandle::Sparse(s) => s.cols(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, MatrixHandle::Sparse(_))
    }

    pub fn as_dense(&self) -> Option<&DenseMatrix> {
        match self {
            MatrixHandle::Dense(d) => Some(d),
            MatrixHandle::Sparse(_) => None,
        }
    }

    pub fn as_sparse(&self) -> Option<&CsrMatrix> {
        match self {
            MatrixHandle::Sparse(s) => Some(s),
            MatrixHandle::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            MatrixHandle::Dense(d) => d.clone(),
            MatrixHandle::Sparse(s) => s.to_dense(),
        }
    }

    /// Stored entries (all entries for dense storage).
    pub fn stored_len(&self) -> usize {
        match self {
            MatrixHandle::Dense(d) => d.rows() * d.cols(),
            MatrixHandle::Sparse(s) => s.nnz(),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        match self {
            MatrixHandle::Dense(d) => d.fro_norm(),
            MatrixHandle::Sparse(s) => s.fro_norm(),
        }
    }

    pub fn gather_cols(&self, idx: &[usize]) -> Result<MatrixHandle> {
        Ok(match self {
            MatrixHandle::Dense(d) => d.gather_cols(idx)?.into(),
            MatrixHandle::Sparse(s) => s.gather_cols(idx)?.into(),
        })
    }

    pub fn gather_rows(&self, idx: &[usize]) -> Result<MatrixHandle> {
        Ok(match self {
            MatrixHandle::Dense(d) => d.gather_rows(idx)?.into(),
            MatrixHandle::Sparse(s) => s.gather_rows(idx)?.into(),
        })
    }

    /// Dense `A(I, J)`.
    pub fn gather_block(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix> {
        match self {
            MatrixHandle::Dense(d) => d.gather_block(rows, cols),
            MatrixHandle::Sparse(s) => s.gather_block(rows, cols),
        }
    }

    /// Caches a column index for sparse storage; no-op for dense.
    pub fn build_col_index(&self) {
        if let MatrixHandle::Sparse(s) = self {
            s.build_col_index();
        }
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &MatrixHandle) -> Result<DenseMatrix> {
        match (self, other) {
            (MatrixHandle::Dense(a), MatrixHandle::Dense(b)) => a.matmul(b),
            (MatrixHandle::Sparse(a), MatrixHandle::Dense(b)) => a.mul_dense(b),
            (MatrixHandle::Dense(a), MatrixHandle::Sparse(b)) => b.dense_mul(a),
            (MatrixHandle::Sparse(a), MatrixHandle::Sparse(b)) => a.mul_dense(&b.to_dense()),
        }
    }

    /// `self * b` for dense `b`.
    pub fn mul_dense(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            MatrixHandle::Dense(a) => a.matmul(b),
            MatrixHandle::Sparse(a) => a.mul_dense(b),
        }
    }

    /// `a * self` for dense `a`.
    pub fn dense_mul(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            MatrixHandle::Dense(b) => a.matmul(b),
            MatrixHandle::Sparse(b) => b.dense_mul(a),
        }
    }

    /// Dense copy of the column panel `[start, end)`.
    pub fn col_panel(&self, start: usize, end: usize) -> Result<DenseMatrix> {
        if start > end || end > self.cols() {
            return Err(Error::InvalidArgument(format!(
                "column panel {start}..{end} outside 0..{}",
                self.cols()
            )));
        }
        let w = end - start;
        let mut out = DenseMatrix::zeros(self.rows(), w);
        match self {
            MatrixHandle::Dense(d) => {
                for i in 0..d.rows() {
                    out.row_mut(i).copy_from_slice(&d.row(i)[start..end]);
                }
            }
            MatrixHandle::Sparse(s) => {
                for i in 0..s.rows() {
                    let (ci, cv) = s.row(i);
                    let lo = ci.partition_point(|&j| j < start);
                    let hi = ci.partition_point(|&j| j < end);
                    let dst = out.row_mut(i);
                    for p in lo..hi {
                        dst[ci[p] - start] = cv[p];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `A(:, J)`; sparse input stays sparse.
pub fn gather_cols(a: &MatrixHandle, idx: &[usize]) -> Result<MatrixHandle> {
    a.gather_cols(idx)
}

/// `A(I, :)`; sparse input stays sparse.
pub fn gather_rows(a: &MatrixHandle, idx: &[usize]) -> Result<MatrixHandle> {
    a.gather_rows(idx)
}

/// Dense product of any storage combination.
pub fn matmul(a: &MatrixHandle, b: &MatrixHandle) -> Result<DenseMatrix> {
    a.matmul(b)
}

pub fn fro_norm(a: &MatrixHandle) -> f64 {
    a.fro_norm()
}
