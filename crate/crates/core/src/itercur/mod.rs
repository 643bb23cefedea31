//! The rank-adaptive CUR driver, its stopping rule and run diagnostics.

mod driver;
mod residual;
mod stopping;
mod trace;

pub use driver::{iterative_cur, IterativeCur};
pub use residual::{true_relative_error, PANEL_COLS};
pub use stopping::{adjusted_threshold, gratton_tail, StoppingConfig};
pub use trace::{IterationRecord, PhaseTimings, RunStatus, RunTrace};
