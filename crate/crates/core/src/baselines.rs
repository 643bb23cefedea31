//! Reference methods: exact truncated SVD error, one-shot sketched LUPP CUR,
//! the randomized rangefinder, and a dense residual oracle.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matcore::householder::{self, Pivoting};
use crate::matcore::{default_pinv_tol, CurFactors, DenseMatrix, MatrixHandle};
use crate::select::{select_columns, select_rows, SelectionMethod};
use crate::sketch::gaussian_matrix;

/// Singular values of a dense matrix and their tail energies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    /// Nonincreasing, length `min(m, n)`.
    pub singular_values: Vec<f64>,
    /// `tails[r] = sqrt(Σ_{i > r} σ_i²)`, length `min(m, n) + 1`.
    pub tails: Vec<f64>,
}

impl SpectrumSummary {
    pub fn of(a: &DenseMatrix) -> Self {
        let (m, n) = a.shape();
        let mut singular_values: Vec<f64> = if m == 0 || n == 0 {
            Vec::new()
        } else {
            DMatrix::from_row_slice(m, n, a.data())
                .singular_values()
                .iter()
                .copied()
                .collect()
        };
        singular_values.sort_by(|x, y| y.total_cmp(x));
        // Accumulate from the smallest value up so tiny tails keep their digits.
        let p = singular_values.len();
        let mut tails = vec![0.0; p + 1];
        let mut acc = 0.0;
        for r in (0..p).rev() {
            acc += singular_values[r] * singular_values[r];
            tails[r] = acc.sqrt();
        }
        Self {
            singular_values,
            tails,
        }
    }

    /// `t_r`; zero for `r >= min(m, n)`.
    pub fn tail(&self, r: usize) -> f64 {
        self.tails.get(r).copied().unwrap_or(0.0)
    }
}

/// `‖A - A_r‖_F` for the best rank-`r` approximation `A_r`.
pub fn truncated_svd_error(a: &DenseMatrix, r: usize) -> f64 {
    SpectrumSummary::of(a).tail(r)
}

/// Fixed-rank sketched LUPP CUR.
///
/// Columns come from LUPP on `(G' A)ᵀ` with a fresh `⌈1.1 r⌉ x m` Gaussian
/// `G'`, rows from LUPP on `A(:, J)`. If either selection truncates, the
/// rank drops to the shorter of the two.
pub fn slupp_cur(a: &MatrixHandle, r: usize, seed: u64) -> Result<CurFactors> {
    let (m, n) = a.shape();
    if r > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank {r} exceeds min(m, n) = {}",
            m.min(n)
        )));
    }
    if r == 0 {
        return Ok(CurFactors::empty(a));
    }
    let c = (11 * r).div_ceil(10);
    let g = gaussian_matrix(c, m, seed);
    let ga = a.dense_mul(&g)?;
    let lupp = SelectionMethod::lupp();
    let mut cols = select_columns(&ga, r, &lupp, &[])?.indices;
    if cols.is_empty() {
        return Ok(CurFactors::empty(a));
    }
    let c_block = a.gather_cols(&cols)?.to_dense();
    let rows = select_rows(&c_block, cols.len(), &lupp, &[])?.indices;
    cols.truncate(rows.len());
    match CurFactors::from_indices(a, rows, cols, None) {
        Err(Error::SingularCrossBlock) => Ok(CurFactors::empty(a)),
        other => other,
    }
}

/// `‖A - A X^† X‖_F` for `X = G A` with a `b x m` Gaussian `G`.
///
/// `X^† X` is the projector onto the row space of `X`, taken from
/// rank-revealing QR of `Xᵀ`.
pub fn rangefinder_error(a: &DenseMatrix, b: usize, seed: u64) -> Result<f64> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!(
            "block {b} must be at least 2"
        )));
    }
    let (m, n) = a.shape();
    let x = gaussian_matrix(b, m, seed).matmul(a)?;
    let xt = x.transpose();
    let flags = vec![true; b];
    let tol = default_pinv_tol(b, n);
    let mut first = 0.0;
    let qr = householder::factor(&xt, b, Pivoting::Greedy(&flags), |k, norm| {
        if k == 0 {
            first = norm;
        }
        norm == 0.0 || norm < tol * first
    });
    let q = qr.thin_q(qr.steps());
    let aq = a.matmul(&q)?;
    Ok(a.sub(&aq.matmul_t(&q)?)?.fro_norm())
}

/// Dense `A - C U R`.
pub fn naive_cur_residual(a: &DenseMatrix, cur: &CurFactors) -> Result<DenseMatrix> {
    if cur.shape() != a.shape() {
        return Err(Error::DimensionMismatch {
            op: "naive_cur_residual",
            left: a.shape(),
            right: cur.shape(),
        });
    }
    a.sub(&cur.to_dense()?)
}
