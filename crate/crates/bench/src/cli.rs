use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, ExperimentConfig, MatrixSource};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "itercur-bench",
    version,
    about = "Runs CUR approximation experiments and writes CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank-adaptive runs to a tolerance, with s-LUPP at the rank found.
    Threshold(CommonArgs),
    /// Fixed ranks: iterative, s-LUPP and truncated SVD.
    FixedRank(CommonArgs),
    /// LUPP against QRCP selection over a rank grid.
    Selection(CommonArgs),
    /// Iterative runs over a block-size by rank grid.
    BlockSize(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// gen:<kind>:<args> (lowrank, lowrankpd, lehmer, expdecay, identity) or mm:<path>
    #[arg(long)]
    pub matrix: String,
    #[arg(long, default_value_t = 50)]
    pub b: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub risk_adjust: bool,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',')]
    pub ranks: Vec<usize>,
    /// Comma-separated block sizes.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Single-threaded execution.
    #[arg(long)]
    pub deterministic: bool,
}

impl Cli {
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let (experiment, args) = match self.command {
            Command::Threshold(a) => (Experiment::Threshold, a),
            Command::FixedRank(a) => (Experiment::FixedRank, a),
            Command::Selection(a) => (Experiment::Selection, a),
            Command::BlockSize(a) => (Experiment::BlockSize, a),
        };
        let cfg = ExperimentConfig {
            experiment,
            matrix: args.matrix.parse::<MatrixSource>()?,
            b: args.b,
            epsilon: args.eps,
            delta: args.delta,
            alpha: args.alpha,
            risk_adjust: args.risk_adjust,
            ranks: args.ranks,
            blocks: args.blocks,
            reps: args.reps,
            seed: args.seed,
            out: args.out,
            deterministic: args.deterministic,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
