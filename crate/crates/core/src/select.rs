//! Pivot-based index selection on small residual matrices.
//!
//! LUPP picks the rows of partial-pivoted Gaussian elimination; QRCP picks
//! the columns of column-pivoted Householder QR. Column selection runs LUPP
//! on `Mᵀ` and QRCP on `M`; row selection does the opposite. Ties in pivot
//! magnitude go to the lowest index, and excluded indices are never pivots.

use crate::error::{Error, Result};
use crate::matcore::householder::{self, Pivoting};
use crate::matcore::DenseMatrix;

/// Absolute pivot floor relative to the matrix scale: `1e2 * ε_mach`.
pub const ABS_FLOOR_FACTOR: f64 = 1e2 * f64::EPSILON;

/// Default relative pivot floor.
pub const DEFAULT_PIVOT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionTag {
    Lupp,
    Qrcp,
    /// Reserved. Selecting with it returns [`Error::NotImplemented`].
    Osinsky,
}

impl std::fmt::Display for SelectionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectionTag::Lupp => "LUPP",
            SelectionTag::Qrcp => "QRCP",
            SelectionTag::Osinsky => "Osinsky",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionMethod {
    tag: SelectionTag,
    pivot_floor: f64,
}

impl SelectionMethod {
    /// `pivot_floor` must lie in `(0, 1)`: a block ends early once a pivot
    /// drops below `pivot_floor` times the block's first pivot.
    pub fn new(tag: SelectionTag, pivot_floor: f64) -> Result<Self> {
        if !(pivot_floor > 0.0 && pivot_floor < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "pivot floor {pivot_floor} must lie in (0, 1)"
            )));
        }
        Ok(Self { tag, pivot_floor })
    }

    pub fn lupp() -> Self {
        Self {
            tag: SelectionTag::Lupp,
            pivot_floor: DEFAULT_PIVOT_FLOOR,
        }
    }

    pub fn qrcp() -> Self {
        Self {
            tag: SelectionTag::Qrcp,
            pivot_floor: DEFAULT_PIVOT_FLOOR,
        }
    }

    pub fn tag(&self) -> SelectionTag {
        self.tag
    }

    pub fn pivot_floor(&self) -> f64 {
        self.pivot_floor
    }
}

impl Default for SelectionMethod {
    fn default() -> Self {
        Self::lupp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub indices: Vec<usize>,
    /// `true` iff fewer than `b` indices were returned.
    pub truncated: bool,
    /// Magnitude of the last accepted pivot (0 when none was accepted).
    pub last_pivot_magnitude: f64,
}

/// Chooses up to `b` columns of the `c x n` matrix `m`.
pub fn select_columns(
    m: &DenseMatrix,
    b: usize,
    method: &SelectionMethod,
    exclude: &[usize],
) -> Result<SelectionResult> {
    select_columns_scaled(m, b, method, exclude, 0.0)
}

/// Chooses up to `b` rows of the `m x b_eff` matrix `m`.
pub fn select_rows(
    m: &DenseMatrix,
    b: usize,
    method: &SelectionMethod,
    exclude: &[usize],
) -> Result<SelectionResult> {
    select_rows_scaled(m, b, method, exclude, 0.0)
}

/// [`select_columns`] with the absolute pivot floor taken relative to
/// `max(‖M‖_F, scale)`. Passing the norm of the unreduced matrix lets a
/// caller detect a residual that has decayed to roundoff.
pub fn select_columns_scaled(
    m: &DenseMatrix,
    b: usize,
    method: &SelectionMethod,
    exclude: &[usize],
    scale: f64,
) -> Result<SelectionResult> {
    let floors = Floors::new(m, method, scale);
    let mask = exclusion_mask(m.cols(), exclude)?;
    match method.tag {
        SelectionTag::Lupp => Ok(lupp(m.transpose(), b, &mask, floors)),
        SelectionTag::Qrcp => Ok(qrcp(m, b, &mask, floors)),
        SelectionTag::Osinsky => Err(Error::NotImplemented("Osinsky selection")),
    }
}

/// [`select_rows`] with the absolute pivot floor taken relative to
/// `max(‖M‖_F, scale)`.
pub fn select_rows_scaled(
    m: &DenseMatrix,
    b: usize,
    method: &SelectionMethod,
    exclude: &[usize],
    scale: f64,
) -> Result<SelectionResult> {
    let floors = Floors::new(m, method, scale);
    let mask = exclusion_mask(m.rows(), exclude)?;
    match method.tag {
        SelectionTag::Lupp => Ok(lupp(m.clone(), b, &mask, floors)),
        SelectionTag::Qrcp => Ok(qrcp(&m.transpose(), b, &mask, floors)),
        SelectionTag::Osinsky => Err(Error::NotImplemented("Osinsky selection")),
    }
}

#[derive(Debug, Clone, Copy)]
struct Floors {
    relative: f64,
    absolute: f64,
}

impl Floors {
    fn new(m: &DenseMatrix, method: &SelectionMethod, scale: f64) -> Self {
        Self {
            relative: method.pivot_floor,
            absolute: ABS_FLOOR_FACTOR * m.fro_norm().max(scale),
        }
    }

    fn rejects(&self, step: usize, first: f64, pivot: f64) -> bool {
        pivot == 0.0 || pivot < self.absolute || (step > 0 && pivot < self.relative * first)
    }
}

fn exclusion_mask(len: usize, exclude: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; len];
    for &e in exclude {
        if e >= len {
            return Err(Error::IndexOutOfRange {
                index: e,
                len,
                axis: "excluded index",
            });
        }
        mask[e] = true;
    }
    Ok(mask)
}

/// Partial-pivoted elimination on `w`, choosing pivot rows.
fn lupp(mut w: DenseMatrix, b: usize, excluded: &[bool], floors: Floors) -> SelectionResult {
    let q = w.cols();
    let steps = b.min(q);
    let mut taken = excluded.to_vec();
    let mut indices = Vec::with_capacity(steps);
    let mut first = 0.0;
    let mut last = 0.0;

    for k in 0..steps {
        let mut best: Option<(usize, f64)> = None;
        for (i, &t) in taken.iter().enumerate() {
            if t {
                continue;
            }
            let mag = w.get(i, k).abs();
            if best.is_none_or(|(_, bm)| mag > bm) {
                best = Some((i, mag));
            }
        }
        let Some((piv, mag)) = best else { break };
        if floors.rejects(k, first, mag) {
            break;
        }
        if k == 0 {
            first = mag;
        }
        last = mag;
        taken[piv] = true;
        indices.push(piv);

        let pivot_row = w.row(piv)[k..].to_vec();
        let inv = 1.0 / pivot_row[0];
        for (i, &t) in taken.iter().enumerate() {
            if t {
                continue;
            }
            let row = &mut w.row_mut(i)[k..];
            let l = row[0] * inv;
            if l == 0.0 {
                continue;
            }
            row[0] = 0.0;
            for (d, s) in row[1..].iter_mut().zip(&pivot_row[1..]) {
                *d -= l * s;
            }
        }
    }

    SelectionResult {
        truncated: indices.len() < b,
        indices,
        last_pivot_magnitude: last,
    }
}

/// Column-pivoted Householder QR on `m`, choosing pivot columns.
fn qrcp(m: &DenseMatrix, b: usize, excluded: &[bool], floors: Floors) -> SelectionResult {
    let eligible: Vec<bool> = excluded.iter().map(|&e| !e).collect();
    let mut first = 0.0;
    let qr = householder::factor(m, b, Pivoting::Greedy(&eligible), |k, norm| {
        if floors.rejects(k, first, norm) {
            return true;
        }
        if k == 0 {
            first = norm;
        }
        false
    });
    let steps = qr.steps();
    SelectionResult {
        indices: qr.pivots(steps),
        truncated: steps < b,
        last_pivot_magnitude: qr.rdiag.last().copied().unwrap_or(0.0),
    }
}
