//! Householder QR, optionally with greedy column pivoting.
//!
//! The pivot at step `k` is the remaining column with the largest 2-norm
//! over rows `k..m` after the first `k` reflections. Norms are recomputed
//! from scratch each step rather than downdated, which keeps the pivot
//! sequence exact at the cost of an extra `O(m n)` per step.

use crate::matcore::dense::DenseMatrix;

pub(crate) struct Qr {
    pub m: usize,
    /// Original column index at each pivot position.
    pub perm: Vec<usize>,
    /// `|R[k, k]|` for each completed step.
    pub rdiag: Vec<f64>,
    /// Working columns in pivot order; rows `..=k` of column `k` hold `R`.
    cols: Vec<Vec<f64>>,
    vs: Vec<Vec<f64>>,
    taus: Vec<f64>,
}

#[derive(Clone, Copy)]
pub(crate) enum Pivoting<'a> {
    None,
    /// Pivot among columns whose flag is `true`. Columns with `false` are
    /// carried along but never chosen.
    Greedy(&'a [bool]),
}

/// Runs up to `max_steps` Householder steps on `a`.
///
/// With pivoting, `stop(step, pivot_norm)` is consulted before each step and
/// ends the factorization when it returns `true`; steps also end when no
/// eligible column remains.
pub(crate) fn factor(
    a: &DenseMatrix,
    max_steps: usize,
    pivoting: Pivoting<'_>,
    mut stop: impl FnMut(usize, f64) -> bool,
) -> Qr {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut eligible: Vec<bool> = match pivoting {
        Pivoting::None => vec![true; n],
        Pivoting::Greedy(flags) => flags.to_vec(),
    };
    let steps = max_steps.min(m).min(n);
    let mut rdiag = Vec::with_capacity(steps);
    let mut vs = Vec::with_capacity(steps);
    let mut taus = Vec::with_capacity(steps);

    for k in 0..steps {
        if let Pivoting::Greedy(_) = pivoting {
            let mut best: Option<(usize, f64)> = None;
            for p in k..n {
                if !eligible[p] {
                    continue;
                }
                let norm2: f64 = cols[p][k..].iter().map(|v| v * v).sum();
                let better = match best {
                    None => true,
                    Some((bp, bn)) => norm2 > bn || (norm2 == bn && perm[p] < perm[bp]),
                };
                if better {
                    best = Some((p, norm2));
                }
            }
            let Some((p, norm2)) = best else { break };
            if stop(k, norm2.sqrt()) {
                break;
            }
            cols.swap(k, p);
            perm.swap(k, p);
            eligible.swap(k, p);
        }

        let x = &cols[k][k..];
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        rdiag.push(norm);
        let mut v = x.to_vec();
        let tau;
        if norm == 0.0 {
            tau = 0.0;
        } else {
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|e| e * e).sum();
            tau = if vnorm2 == 0.0 { 0.0 } else { 2.0 / vnorm2 };
            cols[k][k] = alpha;
            for e in cols[k][k + 1..].iter_mut() {
                *e = 0.0;
            }
        }
        if tau != 0.0 {
            for col in cols.iter_mut().skip(k + 1) {
                let seg = &mut col[k..];
                let w: f64 = seg.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() * tau;
                for (s, vi) in seg.iter_mut().zip(&v) {
                    *s -= w * vi;
                }
            }
        }
        vs.push(v);
        taus.push(tau);
    }

    Qr {
        m,
        perm,
        rdiag,
        cols,
        vs,
        taus,
    }
}

impl Qr {
    pub fn steps(&self) -> usize {
        self.rdiag.len()
    }

    /// Leading `k` pivot columns.
    pub fn pivots(&self, k: usize) -> Vec<usize> {
        self.perm[..k].to_vec()
    }

    /// `R[0..k, 0..n]` in pivot order.
    pub fn r_rows(&self, k: usize) -> DenseMatrix {
        let n = self.cols.len();
        DenseMatrix::from_fn(k, n, |i, j| if i <= j { self.cols[j][i] } else { 0.0 })
    }

    /// First `k` columns of the orthogonal factor (`m x k`).
    pub fn thin_q(&self, k: usize) -> DenseMatrix {
        let s = self.steps();
        let mut q = DenseMatrix::zeros(self.m, k);
        let mut col = vec![0.0; self.m];
        for j in 0..k {
            col.iter_mut().for_each(|e| *e = 0.0);
            col[j] = 1.0;
            for step in (0..s).rev() {
                let tau = self.taus[step];
                if tau == 0.0 {
                    continue;
                }
                let v = &self.vs[step];
                let seg = &mut col[step..];
                let w: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() * tau;
                for (e, vi) in seg.iter_mut().zip(v) {
                    *e -= w * vi;
                }
            }
            for (i, v) in col.iter().enumerate() {
                q.set(i, j, *v);
            }
        }
        q
    }
}
