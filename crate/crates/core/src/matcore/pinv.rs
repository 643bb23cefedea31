//! The CUR core `A(I, J)^†`, held as a complete orthogonal decomposition.
//!
//! With `X P = Q R` from pivoted QR truncated at numerical rank `k`, and
//! `R[0..k, :]ᵀ = Z Lᵀ` from a second unpivoted QR, the operator is
//! `X^† = (P Z) L^{-1} Q_1ᵀ`. It is never formed explicitly during the
//! iteration; [`FactoredPinv::explicit`] exists for export.

use crate::error::{Error, Result};
use crate::matcore::dense::DenseMatrix;
use crate::matcore::householder::{self, Pivoting};

/// Relative rank tolerance used when none is given: `1e-12 * max(p, q)`.
pub fn default_pinv_tol(rows: usize, cols: usize) -> f64 {
    1e-12 * rows.max(cols).max(1) as f64
}

#[derive(Debug, Clone)]
pub struct FactoredPinv {
    rows: usize,
    cols: usize,
    /// `Q_1`, `rows x k`.
    q1: DenseMatrix,
    /// Lower triangular, `k x k`.
    l: DenseMatrix,
    /// `P Z`, `cols x k`.
    w: DenseMatrix,
    tol: f64,
    leading_diag: f64,
}

/// Factors `x` for pseudoinverse application.
///
/// Triangular diagonal entries below `tol * |R[0, 0]|` are discarded. An
/// all-zero block is an error: it means index selection picked nothing
/// useful.
pub fn build_pinv(x: &DenseMatrix, tol: f64) -> Result<FactoredPinv> {
    let (p, q) = x.shape();
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "pinv tolerance {tol} must be >= 0"
        )));
    }
    let flags = vec![true; q];
    let qr = householder::factor(x, p.min(q), Pivoting::Greedy(&flags), |_, _| false);
    let leading = qr.rdiag.first().copied().unwrap_or(0.0);
    if leading == 0.0 {
        return Err(Error::SingularCrossBlock);
    }
    let rank = qr
        .rdiag
        .iter()
        .take_while(|&&d| d >= tol * leading && d > 0.0)
        .count();

    let q1 = qr.thin_q(rank);
    // R1 is rank x q in pivot order; factor its transpose.
    let r1t = qr.r_rows(rank).transpose();
    let second = householder::factor(&r1t, rank, Pivoting::None, |_, _| false);
    let z = second.thin_q(rank);
    let l = second.r_rows(rank).transpose();
    let mut w = DenseMatrix::zeros(q, rank);
    for (pos, &orig) in qr.perm.iter().enumerate() {
        w.row_mut(orig).copy_from_slice(z.row(pos));
    }

    Ok(FactoredPinv {
        rows: p,
        cols: q,
        q1,
        l,
        w,
        tol,
        leading_diag: leading,
    })
}

impl FactoredPinv {
    /// Numerical rank retained.
    pub fn rank(&self) -> usize {
        self.l.rows()
    }

    /// Shape of the factored block `X` (the operator is the transpose shape).
    pub fn block_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `|R[0, 0]|` of the pivoted factorization, i.e. the largest column norm.
    pub fn leading_diag(&self) -> f64 {
        self.leading_diag
    }

    /// `X^† M`.
    pub fn apply_left(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        if m.rows() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "apply_pinv_left",
                left: (self.cols, self.rows),
                right: m.shape(),
            });
        }
        let mut y = self.q1.t_matmul(m)?;
        forward_solve_in_place(&self.l, &mut y);
        self.w.matmul(&y)
    }

    /// `M X^†`.
    pub fn apply_right(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        if m.cols() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "apply_pinv_right",
                left: m.shape(),
                right: (self.cols, self.rows),
            });
        }
        let mut y = m.matmul(&self.w)?;
        right_solve_lower_in_place(&self.l, &mut y);
        y.matmul_t(&self.q1)
    }

    /// Materialized `X^†` (`cols x rows`).
    pub fn explicit(&self) -> DenseMatrix {
        self.apply_left(&DenseMatrix::identity(self.rows))
            .expect("identity is conformable")
    }
}

/// Solves `L Y = B` in place, `L` lower triangular.
fn forward_solve_in_place(l: &DenseMatrix, b: &mut DenseMatrix) {
    let k = l.rows();
    let n = b.cols();
    for i in 0..k {
        for j in 0..i {
            let lij = l.get(i, j);
            if lij == 0.0 {
                continue;
            }
            let (head, tail) = b.data_mut().split_at_mut(i * n);
            let src = &head[j * n..(j + 1) * n];
            for (d, s) in tail[..n].iter_mut().zip(src) {
                *d -= lij * s;
            }
        }
        let inv = 1.0 / l.get(i, i);
        b.row_mut(i).iter_mut().for_each(|v| *v *= inv);
    }
}

/// Solves `Y L = B` in place, `L` lower triangular.
fn right_solve_lower_in_place(l: &DenseMatrix, b: &mut DenseMatrix) {
    let k = l.rows();
    for r in 0..b.rows() {
        let row = b.row_mut(r);
        for j in (0..k).rev() {
            let mut s = row[j];
            for (i, v) in row.iter().enumerate().take(k).skip(j + 1) {
                s -= v * l.get(i, j);
            }
            row[j] = s / l.get(j, j);
        }
    }
}

/// `X^† M` for a prepared core.
pub fn apply_pinv_left(p: &FactoredPinv, m: &DenseMatrix) -> Result<DenseMatrix> {
    p.apply_left(m)
}

/// `M X^†` for a prepared core.
pub fn apply_pinv_right(p: &FactoredPinv, m: &DenseMatrix) -> Result<DenseMatrix> {
    p.apply_right(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.sub(b).unwrap().fro_norm() / b.fro_norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn diagonal_inverse() {
        let p = build_pinv(&DenseMatrix::from_diag(&[2.0, 4.0]), 1e-12).unwrap();
        let e = p.explicit();
        assert!(rel(&e, &DenseMatrix::from_diag(&[0.5, 0.25])) < 1e-15);
    }

    #[test]
    fn rank_deficient_block_acts_as_projector() {
        let x = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let p = build_pinv(&x, 1e-12).unwrap();
        assert_eq!(p.rank(), 1);
        let y = p
            .apply_left(&DenseMatrix::from_rows(&[&[1.0], &[0.0]]))
            .unwrap();
        assert_eq!(y.data(), &[1.0, 0.0]);
    }

    #[test]
    fn zero_block_is_singular() {
        let err = build_pinv(&DenseMatrix::zeros(3, 3), 1e-12).unwrap_err();
        assert!(matches!(err, Error::SingularCrossBlock));
        assert!(err.to_string().contains("singular cross block"));
    }

    #[test]
    fn identity_and_scalar_cores() {
        let p = build_pinv(&DenseMatrix::identity(3), 1e-12).unwrap();
        let m = DenseMatrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64 - 5.0);
        assert!(rel(&p.apply_left(&m).unwrap(), &m) < 1e-15);
        let p = build_pinv(&DenseMatrix::from_rows(&[&[2.0]]), 1e-12).unwrap();
        let y = p.apply_left(&DenseMatrix::from_rows(&[&[6.0]])).unwrap();
        assert_eq!(y.data(), &[3.0]);
    }

    #[test]
    fn left_and_right_application_agree_with_explicit() {
        let x = DenseMatrix::from_rows(&[&[4.0, 1.0, -2.0], &[1.0, 3.0, 0.5], &[0.0, -1.0, 2.5]]);
        let p = build_pinv(&x, 1e-12).unwrap();
        let u = p.explicit();
        let m = DenseMatrix::from_fn(3, 2, |i, j| (i as f64 + 1.0) * (j as f64 - 0.5));
        assert!(rel(&p.apply_left(&m).unwrap(), &u.matmul(&m).unwrap()) < 1e-14);
        let mt = m.transpose();
        assert!(rel(&p.apply_right(&mt).unwrap(), &mt.matmul(&u).unwrap()) < 1e-14);
        assert!(rel(&u.matmul(&x).unwrap(), &DenseMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn shape_errors() {
        let p = build_pinv(&DenseMatrix::identity(2), 1e-12).unwrap();
        assert!(p.apply_left(&DenseMatrix::zeros(3, 1)).is_err());
        assert!(p.apply_right(&DenseMatrix::zeros(1, 3)).is_err());
    }
}
