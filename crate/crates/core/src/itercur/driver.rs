use std::time::Instant;

use crate::error::{Error, Result};
use crate::itercur::stopping::StoppingConfig;
use crate::itercur::trace::{IterationRecord, PhaseTimings, RunStatus, RunTrace};
use crate::matcore::{CurFactors, MatrixHandle};
use crate::select::{select_columns_scaled, select_rows_scaled, SelectionMethod};
use crate::sketch::{make_sketch, row_residual, SketchState};

/// Sparse inputs get a column index once this many blocks have been taken.
const COL_INDEX_AFTER: usize = 4;

/// Runs the rank-adaptive loop to completion.
pub fn iterative_cur(
    a: &MatrixHandle,
    cfg: &StoppingConfig,
    col_method: &SelectionMethod,
    row_method: &SelectionMethod,
    seed: u64,
) -> Result<(CurFactors, RunTrace)> {
    let mut run = IterativeCur::new(a, cfg, *col_method, *row_method, seed)?;
    while run.step()?.is_some() {}
    Ok(run.finish())
}

/// Step-wise form of [`iterative_cur`], for callers that inspect the
/// factors between iterations.
#[derive(Debug)]
pub struct IterativeCur<'a> {
    a: &'a MatrixHandle,
    col_method: SelectionMethod,
    row_method: SelectionMethod,
    pinv_tol: Option<f64>,
    b: usize,
    max_rank: usize,
    max_iters: usize,
    sketch: SketchState,
    cur: CurFactors,
    rho: f64,
    trace: RunTrace,
    done: bool,
}

impl<'a> IterativeCur<'a> {
    pub fn new(
        a: &'a MatrixHandle,
        cfg: &StoppingConfig,
        col_method: SelectionMethod,
        row_method: SelectionMethod,
        seed: u64,
    ) -> Result<Self> {
        cfg.validate()?;
        let (m, n) = a.shape();
        let threshold = cfg.threshold()?;
        let sketch = make_sketch(seed, cfg.b, a)?;
        let min_dim = m.min(n);
        let max_rank = cfg.max_rank.unwrap_or(min_dim);
        if max_rank > min_dim {
            return Err(Error::InvalidArgument(format!(
                "max rank {max_rank} exceeds min(m, n) = {min_dim}"
            )));
        }
        let max_iters = cfg.max_iters.unwrap_or(min_dim.div_ceil(cfg.b) + 1);
        let rho = sketch.rho();
        let note = (cfg.epsilon >= 1.0).then(|| {
            format!(
                "epsilon {} >= 1: the empty factorization suffices",
                cfg.epsilon
            )
        });
        let mut run = Self {
            a,
            col_method,
            row_method,
            pinv_tol: cfg.pinv_tol,
            b: cfg.b,
            max_rank,
            max_iters,
            cur: CurFactors::empty(a),
            trace: RunTrace {
                records: Vec::new(),
                status: RunStatus::Converged,
                rho0: rho,
                threshold,
                sketch_rows: sketch.c(),
                note,
            },
            sketch,
            rho,
            done: false,
        };
        run.check_stop();
        Ok(run)
    }

    pub fn cur(&self) -> &CurFactors {
        &self.cur
    }

    pub fn sketch(&self) -> &SketchState {
        &self.sketch
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Runs one iteration. Returns `None` once the run has stopped.
    pub fn step(&mut self) -> Result<Option<&IterationRecord>> {
        if self.done {
            return Ok(None);
        }
        let mut t = PhaseTimings::default();
        let width = self.b.min(self.max_rank - self.cur.rank());

        let clock = Instant::now();
        let cols = select_columns_scaled(
            self.sketch.s_col(),
            width,
            &self.col_method,
            self.cur.col_indices(),
            self.sketch.ga_norm(),
        )?;
        t.select_cols = clock.elapsed();
        if cols.indices.is_empty() {
            return Ok(self.stop(RunStatus::ResidualExhausted));
        }

        let clock = Instant::now();
        let s_row = row_residual(self.a, &self.cur, &cols.indices)?;
        let scale = self.a.gather_cols(&cols.indices)?.fro_norm();
        t.row_residual = clock.elapsed();

        let clock = Instant::now();
        let rows = select_rows_scaled(
            &s_row,
            cols.indices.len(),
            &self.row_method,
            self.cur.row_indices(),
            scale,
        )?;
        t.select_rows = clock.elapsed();
        if rows.indices.is_empty() {
            return Ok(self.stop(RunStatus::ResidualExhausted));
        }
        let mut new_cols = cols.indices;
        new_cols.truncate(rows.indices.len());

        let clock = Instant::now();
        if self.a.is_sparse() && self.trace.records.len() + 1 >= COL_INDEX_AFTER {
            self.a.build_col_index();
        }
        let mut all_rows = self.cur.row_indices().to_vec();
        all_rows.extend_from_slice(&rows.indices);
        let mut all_cols = self.cur.col_indices().to_vec();
        all_cols.extend_from_slice(&new_cols);
        let next = match CurFactors::from_indices(self.a, all_rows, all_cols, self.pinv_tol) {
            Ok(c) => c,
            Err(Error::SingularCrossBlock) => {
                return Ok(self.stop(RunStatus::ResidualExhausted));
            }
            Err(e) => return Err(e),
        };
        t.update = clock.elapsed();

        let clock = Instant::now();
        self.rho = self.sketch.downdate_col_residual(&next)?;
        t.downdate = clock.elapsed();
        self.cur = next;

        self.trace.records.push(IterationRecord {
            k: self.trace.records.len() + 1,
            rho: self.rho,
            cols_added: new_cols.len(),
            rows_added: rows.indices.len(),
            col_truncated: cols.truncated,
            row_truncated: rows.truncated,
            core_rank: self.cur.core().map_or(0, |c| c.rank()),
            timings: t,
        });
        self.check_stop();
        Ok(self.trace.records.last())
    }

    pub fn finish(self) -> (CurFactors, RunTrace) {
        (self.cur, self.trace)
    }

    fn stop(&mut self, status: RunStatus) -> Option<&IterationRecord> {
        self.trace.status = status;
        self.done = true;
        None
    }

    fn check_stop(&mut self) {
        let status = if self.rho <= self.trace.threshold {
            RunStatus::Converged
        } else if self.cur.rank() >= self.max_rank {
            RunStatus::MaxRank
        } else if self.trace.records.len() >= self.max_iters {
            RunStatus::MaxIterations
        } else {
            return;
        };
        self.stop(status);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::DenseMatrix;

    fn run(a: &DenseMatrix, cfg: &StoppingConfig, seed: u64) -> (CurFactors, RunTrace) {
        let h = MatrixHandle::from(a.clone());
        let m = SelectionMethod::lupp();
        iterative_cur(&h, cfg, &m, &m, seed).unwrap()
    }

    #[test]
    fn large_epsilon_returns_empty_factors() {
        let a = DenseMatrix::from_fn(6, 5, |i, j| (i + 2 * j) as f64 + 1.0);
        let (cur, trace) = run(&a, &StoppingConfig::new(1.0, 2), 0);
        assert!(cur.is_empty());
        assert_eq!(trace.status, RunStatus::Converged);
        assert!(trace.records.is_empty());
        assert!(trace.note.is_some());
    }

    #[test]
    fn identity_reaches_full_rank_exactly() {
        let a = DenseMatrix::identity(6);
        let (cur, trace) = run(&a, &StoppingConfig::fixed_rank(2, 6), 3);
        assert_eq!(cur.rank(), 6);
        assert_eq!(trace.final_rho(), 0.0);
        assert_eq!(trace.status, RunStatus::Converged);
        assert_eq!(trace.iterations(), 3);
    }

    #[test]
    fn rank_cap_limits_the_last_block() {
        let a = DenseMatrix::from_fn(20, 20, |i, j| 1.0 / (i + j + 1) as f64);
        let (cur, trace) = run(&a, &StoppingConfig::fixed_rank(3, 7), 1);
        assert_eq!(cur.rank(), 7);
        assert_eq!(trace.status, RunStatus::MaxRank);
        let widths: Vec<usize> = trace.records.iter().map(|r| r.cols_added).collect();
        assert_eq!(widths, vec![3, 3, 1]);
    }

    #[test]
    fn exhausted_residual_stops_without_error() {
        let u: Vec<f64> = (0..10).map(|i| i as f64 - 4.5).collect();
        let a = DenseMatrix::from_fn(10, 8, |i, j| u[i] * (j as f64 + 1.0));
        let (cur, trace) = run(&a, &StoppingConfig::fixed_rank(2, 8), 5);
        assert_eq!(cur.rank(), 1);
        assert!(matches!(
            trace.status,
            RunStatus::ResidualExhausted | RunStatus::Converged
        ));
    }

    #[test]
    fn iteration_cap() {
        let a = DenseMatrix::from_fn(
            12,
            12,
            |i, j| if i == j { 0.5f64.powi(i as i32) } else { 0.0 },
        );
        let mut cfg = StoppingConfig::new(1e-12, 2);
        cfg.max_iters = Some(2);
        let (cur, trace) = run(&a, &cfg, 0);
        assert_eq!(trace.status, RunStatus::MaxIterations);
        assert_eq!(cur.rank(), 4);
    }

    #[test]
    fn oversized_rank_cap_is_rejected() {
        let h = MatrixHandle::from(DenseMatrix::identity(4));
        let m = SelectionMethod::lupp();
        assert!(IterativeCur::new(&h, &StoppingConfig::fixed_rank(2, 5), m, m, 0).is_err());
    }
}
