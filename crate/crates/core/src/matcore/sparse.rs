//! Compressed-sparse-row matrices.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::matcore::dense::{check_indices, fro_norm_slice, DenseMatrix};
use crate::matcore::par;

/// CSR matrix with column indices strictly increasing inside each row.
///
/// A transposed copy can be cached with [`CsrMatrix::build_col_index`] so
/// repeated column gathers cost `O(nnz of the gathered columns)` instead of a
/// full scan.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    transpose: OnceLock<Arc<CsrMatrix>>,
}

impl PartialEq for CsrMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.indptr == other.indptr
            && self.indices == other.indices
            && self.values == other.values
    }
}

impl CsrMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if indptr.len() != rows + 1 {
            return Err(Error::InvalidData(format!(
                "row pointer has length {}, expected {}",
                indptr.len(),
                rows + 1
            )));
        }
        if indptr[0] != 0 || indptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidData(
                "row pointer must start at 0 and be nondecreasing".into(),
            ));
        }
        if indptr[rows] != values.len() || indices.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "row pointer ends at {}, but {} indices and {} values are stored",
                indptr[rows],
                indices.len(),
                values.len()
            )));
        }
        for i in 0..rows {
            let row = &indices[indptr[i]..indptr[i + 1]];
            if let Some(&j) = row.iter().find(|&&j| j >= cols) {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: cols,
                    axis: "cols",
                });
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidData(format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            for p in indptr[i]..indptr[i + 1] {
                if !values[p].is_finite() {
                    return Err(Error::NonFinite {
                        row: i,
                        col: indices[p],
                        value: values[p],
                    });
                }
            }
        }
        Ok(Self::from_parts_unchecked(
            rows, cols, indptr, indices, values,
        ))
    }

    fn from_parts_unchecked(
        rows: usize,
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        Self {
            rows,
            cols,
            indptr,
            indices,
            values,
            transpose: OnceLock::new(),
        }
    }

    /// Assembles from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, v) in &sorted {
            if i >= rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: rows,
                    axis: "rows",
                });
            }
            if j >= cols {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: cols,
                    axis: "cols",
                });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Ok(Self::from_parts_unchecked(
            rows, cols, indptr, indices, values,
        ))
    }

    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut indptr = Vec::with_capacity(a.rows() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..a.rows() {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self::from_parts_unchecked(a.rows(), a.cols(), indptr, indices, values)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values stored in row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    /// Iterates `(row, col, value)` over stored entries in row order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (idx, val) = self.row(i);
            idx.iter().zip(val).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            out.set(i, j, v);
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        fro_norm_slice(&self.values)
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.cols {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for (i, j, v) in self.triplets() {
            let p = next[j];
            indices[p] = i;
            values[p] = v;
            next[j] += 1;
        }
        Self::from_parts_unchecked(self.cols, self.rows, indptr, indices, values)
    }

    /// Builds (once) and returns the cached transpose.
    pub fn build_col_index(&self) -> &CsrMatrix {
        self.transpose.get_or_init(|| Arc::new(self.transpose()))
    }

    pub fn has_col_index(&self) -> bool {
        self.transpose.get().is_some()
    }

    pub fn gather_rows(&self, idx: &[usize]) -> Result<CsrMatrix> {
        check_indices(idx, self.rows, "rows")?;
        let mut indptr = Vec::with_capacity(idx.len() + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for &i in idx {
            let (ci, cv) = self.row(i);
            indices.extend_from_slice(ci);
            values.extend_from_slice(cv);
            indptr.push(indices.len());
        }
        Ok(Self::from_parts_unchecked(
            idx.len(),
            self.cols,
            indptr,
            indices,
            values,
        ))
    }

    pub fn gather_cols(&self, idx: &[usize]) -> Result<CsrMatrix> {
        check_indices(idx, self.cols, "cols")?;
        if let Some(t) = self.transpose.get() {
            return Ok(t.gather_rows(idx)?.transpose());
        }
        // positions[j] lists every output column that copies input column j
        let mut head = vec![usize::MAX; self.cols];
        let mut next = vec![usize::MAX; idx.len()];
        for (pos, &j) in idx.iter().enumerate().rev() {
            next[pos] = head[j];
            head[j] = pos;
        }
        let mut indptr = Vec::with_capacity(self.rows + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for i in 0..self.rows {
            scratch.clear();
            let (ci, cv) = self.row(i);
            for (&j, &v) in ci.iter().zip(cv) {
                let mut pos = head[j];
                while pos != usize::MAX {
                    scratch.push((pos, v));
                    pos = next[pos];
                }
            }
            scratch.sort_unstable_by_key(|e| e.0);
            for &(p, v) in &scratch {
                indices.push(p);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(Self::from_parts_unchecked(
            self.rows,
            idx.len(),
            indptr,
            indices,
            values,
        ))
    }

    /// Dense `A(I, J)`.
    pub fn gather_block(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix> {
        check_indices(rows, self.rows, "rows")?;
        check_indices(cols, self.cols, "cols")?;
        let mut out = DenseMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            let (ci, cv) = self.row(i);
            for (b, &j) in cols.iter().enumerate() {
                if let Ok(p) = ci.binary_search(&j) {
                    out.set(a, b, cv[p]);
                }
            }
        }
        Ok(out)
    }

    /// `self * b` with dense `b`.
    pub fn mul_dense(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != b.rows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: b.shape(),
            });
        }
        let n = b.cols();
        let mut out = DenseMatrix::zeros(self.rows, n);
        let flops = self.nnz().saturating_mul(n);
        par::for_row_chunks(out.data_mut(), n, flops, |row0, block| {
            for (r, dst) in block.chunks_mut(n).enumerate() {
                let (ci, cv) = self.row(row0 + r);
                for (&k, &v) in ci.iter().zip(cv) {
                    for (d, s) in dst.iter_mut().zip(b.row(k)) {
                        *d += v * s;
                    }
                }
            }
        });
        Ok(out)
    }

    /// `a * self` with dense `a`.
    pub fn dense_mul(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.cols() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: a.shape(),
                right: self.shape(),
            });
        }
        let n = self.cols;
        let mut out = DenseMatrix::zeros(a.rows(), n);
        let flops = self.nnz().saturating_mul(a.rows());
        par::for_row_chunks(out.data_mut(), n, flops, |row0, block| {
            for (r, dst) in block.chunks_mut(n).enumerate() {
                for (k, &s) in a.row(row0 + r).iter().enumerate() {
                    if s == 0.0 {
                        continue;
                    }
                    let (ci, cv) = self.row(k);
                    for (&j, &v) in ci.iter().zip(cv) {
                        dst[j] += s * v;
                    }
                }
            }
        });
        Ok(out)
    }
}
