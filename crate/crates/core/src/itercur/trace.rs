use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    /// `ρ` reached the threshold.
    Converged,
    /// `|J|` reached `max_rank`.
    MaxRank,
    /// No further pivot cleared the floors, or the cross block was singular.
    ResidualExhausted,
    /// The iteration cap was hit first.
    MaxIterations,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunStatus::Converged => "Converged",
            RunStatus::MaxRank => "MaxRank",
            RunStatus::ResidualExhausted => "ResidualExhausted",
            RunStatus::MaxIterations => "MaxIterations",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub select_cols: Duration,
    pub row_residual: Duration,
    pub select_rows: Duration,
    /// Core factorization plus gathering `C` and `R`.
    pub update: Duration,
    pub downdate: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.select_cols + self.row_residual + self.select_rows + self.update + self.downdate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub k: usize,
    /// `ρ_k` after this iteration's downdate.
    pub rho: f64,
    pub cols_added: usize,
    pub rows_added: usize,
    pub col_truncated: bool,
    pub row_truncated: bool,
    /// Numerical rank kept by the core.
    pub core_rank: usize,
    pub timings: PhaseTimings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    pub status: RunStatus,
    /// `ρ_0`, 1 for a nonzero matrix.
    pub rho0: f64,
    pub threshold: f64,
    pub sketch_rows: usize,
    pub note: Option<String>,
}

impl RunTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Last recorded `ρ`, or `ρ_0` if no iteration ran.
    pub fn final_rho(&self) -> f64 {
        self.records.last().map_or(self.rho0, |r| r.rho)
    }

    pub fn total_time(&self) -> Duration {
        self.records.iter().map(|r| r.timings.total()).sum()
    }
}
