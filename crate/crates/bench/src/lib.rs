//! Experiment runner behind the `itercur-bench` binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod run;
pub mod table;

pub use config::{Experiment, ExperimentConfig, MatrixSource};
pub use error::{BenchError, Result};
pub use run::{run, run_block_size, run_fixed_rank, run_selection_methods, run_threshold};
pub use table::Table;
