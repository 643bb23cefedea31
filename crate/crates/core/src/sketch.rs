//! The Gaussian embedding and the sketched residual it carries across
//! iterations.
//!
//! `G` has unit-variance entries. Only the ratio `‖G S‖_F / ‖G A‖_F` drives
//! stopping, so the `1/c` variance scaling of the norm-estimation theory
//! cancels and is never applied.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::{par, CurFactors, DenseMatrix, MatrixHandle};

/// Sketch rows for block size `b`: `⌊1.1 b⌋`.
pub fn sketch_rows(b: usize) -> usize {
    // 11 b / 10 in integer arithmetic avoids 1.1 * 10 = 11.000000000000002
    b * 11 / 10
}

/// Mixes `base` and `stream` into an independent-looking seed (SplitMix64).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `rows x cols` matrix of standard normal draws.
///
/// Row `i` comes from a ChaCha8 stream keyed by `(seed, i)`, and entries
/// within a row are drawn in column order, so the result does not depend on
/// thread count or fill order.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let heavy = rows * cols >= 1 << 16;
    let row_data = par::map_indexed(rows, heavy, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        (0..cols)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect::<Vec<f64>>()
    });
    DenseMatrix::from_vec_unchecked(rows, cols, row_data.concat())
}

/// Embedding `G`, the cached `G A`, and the current sketched residual.
#[derive(Debug, Clone)]
pub struct SketchState {
    g: DenseMatrix,
    ga: DenseMatrix,
    s_col: DenseMatrix,
    ga_norm: f64,
    seed: u64,
    c: usize,
    b: usize,
}

/// Draws `G` (`⌊1.1 b⌋ x m`) and computes `G A` once.
pub fn make_sketch(seed: u64, b: usize, a: &MatrixHandle) -> Result<SketchState> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("matrix is empty".into()));
    }
    if b == 0 {
        return Err(Error::InvalidArgument(
            "block size must be at least 1".into(),
        ));
    }
    if b > m {
        return Err(Error::BlockExceedsRows { b, rows: m });
    }
    let c = sketch_rows(b);
    let g = gaussian_matrix(c, m, seed);
    let ga = a.dense_mul(&g)?;
    let ga_norm = ga.fro_norm();
    Ok(SketchState {
        s_col: ga.clone(),
        g,
        ga,
        ga_norm,
        seed,
        c,
        b,
    })
}

impl SketchState {
    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn ga(&self) -> &DenseMatrix {
        &self.ga
    }

    /// Current `G (A - C U R)`.
    pub fn s_col(&self) -> &DenseMatrix {
        &self.s_col
    }

    pub fn ga_norm(&self) -> f64 {
        self.ga_norm
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sketch rows.
    pub fn c(&self) -> usize {
        self.c
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `‖S_col‖_F / ‖G A‖_F`; zero for a zero matrix.
    pub fn rho(&self) -> f64 {
        if self.ga_norm == 0.0 {
            0.0
        } else {
            self.s_col.fro_norm() / self.ga_norm
        }
    }

    /// Recomputes `S_col = G A - (G A)(:, J) U R` from the cached `G A` and
    /// returns the new `ρ`. `G` is never multiplied against `A` again.
    pub fn downdate_col_residual(&mut self, cur: &CurFactors) -> Result<f64> {
        self.s_col = match cur.core() {
            None => self.ga.clone(),
            Some(core) => {
                let gc = self.ga.gather_cols(cur.col_indices())?;
                let gcu = core.apply_right(&gc)?;
                let gcur = cur.r().dense_mul(&gcu)?;
                self.ga.sub(&gcur)?
            }
        };
        Ok(self.rho())
    }
}

/// Free-function form of [`SketchState::downdate_col_residual`].
pub fn downdate_col_residual(state: &mut SketchState, cur: &CurFactors) -> Result<f64> {
    state.downdate_col_residual(cur)
}

/// `A(:, J_new) - C U R(:, J_new)`, dense `m x |J_new|`.
pub fn row_residual(a: &MatrixHandle, cur: &CurFactors, new_cols: &[usize]) -> Result<DenseMatrix> {
    if let Some(&j) = new_cols.iter().find(|j| cur.col_indices().contains(j)) {
        return Err(Error::InvalidArgument(format!(
            "column {j} is already part of the approximation"
        )));
    }
    let cols = a.gather_cols(new_cols)?.to_dense();
    if cur.is_empty() {
        return Ok(cols);
    }
    let approx = cur.approx_cols(new_cols)?;
    cols.sub(&approx)
}
