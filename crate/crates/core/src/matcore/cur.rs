use crate::error::{Error, Result};
use crate::matcore::dense::DenseMatrix;
use crate::matcore::handle::MatrixHandle;
use crate::matcore::pinv::{build_pinv, default_pinv_tol, FactoredPinv};

/// A cross-approximation `A ≈ C U R` with `C = A(:, J)`, `R = A(I, :)` and
/// `U = A(I, J)^†` held factored.
#[derive(Debug, Clone)]
pub struct CurFactors {
    rows: usize,
    cols: usize,
    row_indices: Vec<usize>,
    col_indices: Vec<usize>,
    c: MatrixHandle,
    r: MatrixHandle,
    core: Option<FactoredPinv>,
}

impl CurFactors {
    /// The rank-0 approximation of `a`.
    pub fn empty(a: &MatrixHandle) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            row_indices: Vec::new(),
            col_indices: Vec::new(),
            c: a.gather_cols(&[]).expect("empty gather"),
            r: a.gather_rows(&[]).expect("empty gather"),
            core: None,
        }
    }

    /// Gathers `C`, `R` and factors the cross block for the given indices.
    ///
    /// `pinv_tol` defaults to [`default_pinv_tol`] of the block shape.
    pub fn from_indices(
        a: &MatrixHandle,
        rows: Vec<usize>,
        cols: Vec<usize>,
        pinv_tol: Option<f64>,
    ) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidArgument(format!(
                "cross block must be square, got {} rows and {} cols",
                rows.len(),
                cols.len()
            )));
        }
        check_distinct(&rows, "row")?;
        check_distinct(&cols, "column")?;
        if rows.is_empty() {
            return Ok(Self::empty(a));
        }
        let cross = a.gather_block(&rows, &cols)?;
        let tol = pinv_tol.unwrap_or_else(|| default_pinv_tol(rows.len(), cols.len()));
        let core = build_pinv(&cross, tol)?;
        Ok(Self {
            rows: a.rows(),
            cols: a.cols(),
            c: a.gather_cols(&cols)?,
            r: a.gather_rows(&rows)?,
            row_indices: rows,
            col_indices: cols,
            core: Some(core),
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Number of selected row/column pairs.
    pub fn rank(&self) -> usize {
        self.col_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.col_indices.is_empty()
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn c(&self) -> &MatrixHandle {
        &self.c
    }

    pub fn r(&self) -> &MatrixHandle {
        &self.r
    }

    pub fn core(&self) -> Option<&FactoredPinv> {
        self.core.as_ref()
    }

    /// Explicit `U`, for export only.
    pub fn u_explicit(&self) -> DenseMatrix {
        match &self.core {
            Some(p) => p.explicit(),
            None => DenseMatrix::zeros(0, 0),
        }
    }

    /// `U R(:, cols)`, a `rank x |cols|` matrix.
    pub fn core_times_r_cols(&self, cols: &[usize]) -> Result<DenseMatrix> {
        match &self.core {
            None => Ok(DenseMatrix::zeros(0, cols.len())),
            Some(p) => {
                let r_cols = self.r.gather_block(&all(self.r.rows()), cols)?;
                p.apply_left(&r_cols)
            }
        }
    }

    /// `C U R(:, cols)`, dense `m x |cols|`.
    pub fn approx_cols(&self, cols: &[usize]) -> Result<DenseMatrix> {
        if self.core.is_none() {
            return Ok(DenseMatrix::zeros(self.rows, cols.len()));
        }
        let ur = self.core_times_r_cols(cols)?;
        self.c.mul_dense(&ur)
    }

    /// `U R` as a dense `rank x n` matrix.
    pub fn core_times_r(&self) -> Result<DenseMatrix> {
        match &self.core {
            None => Ok(DenseMatrix::zeros(0, self.cols)),
            Some(p) => p.apply_left(&self.r.to_dense()),
        }
    }

    /// Dense `C U R`.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.core.is_none() {
            return Ok(DenseMatrix::zeros(self.rows, self.cols));
        }
        self.c.mul_dense(&self.core_times_r()?)
    }
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_distinct(idx: &[usize], what: &str) -> Result<()> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!(
            "{what} index {} selected twice",
            w[0]
        )));
    }
    Ok(())
}
