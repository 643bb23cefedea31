use std::path::PathBuf;
use std::str::FromStr;

use itercur::testmat::{generate, read_matrix_market, GeneratorKind, GeneratorSpec};
use itercur::MatrixHandle;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Threshold,
    FixedRank,
    Selection,
    BlockSize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    Generator(GeneratorKind),
    File(PathBuf),
}

/// `gen:<kind>:<args>` or `mm:<path>`.
impl FromStr for MatrixSource {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("gen:") {
            Ok(MatrixSource::Generator(rest.parse()?))
        } else if let Some(rest) = s.strip_prefix("mm:") {
            Ok(MatrixSource::File(PathBuf::from(rest)))
        } else {
            Err(BenchError::Usage(format!(
                "matrix source '{s}' must start with gen: or mm:"
            )))
        }
    }
}

impl MatrixSource {
    /// Generated matrices take the seed base as their seed.
    pub fn load(&self, seed: u64) -> Result<MatrixHandle> {
        Ok(match self {
            MatrixSource::Generator(kind) => generate(&GeneratorSpec::new(*kind, seed))?,
            MatrixSource::File(path) => read_matrix_market(path)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub matrix: MatrixSource,
    pub b: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub risk_adjust: bool,
    pub ranks: Vec<usize>,
    pub blocks: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub deterministic: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, matrix: MatrixSource) -> Self {
        Self {
            experiment,
            matrix,
            b: 50,
            epsilon: 1e-6,
            delta: 0.0,
            alpha: 0.05,
            risk_adjust: false,
            ranks: Vec::new(),
            blocks: Vec::new(),
            reps: 5,
            seed: 0,
            out: None,
            deterministic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(BenchError::Usage("--reps must be at least 1".into()));
        }
        let needs_ranks = !matches!(self.experiment, Experiment::Threshold);
        if needs_ranks && self.ranks.is_empty() {
            return Err(BenchError::Usage(
                "--ranks must list at least one rank".into(),
            ));
        }
        if self.ranks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::Usage(
                "--ranks must be strictly ascending".into(),
            ));
        }
        if self.experiment == Experiment::BlockSize && self.blocks.is_empty() {
            return Err(BenchError::Usage(
                "--blocks must list at least one block size".into(),
            ));
        }
        if self.b == 0 || self.blocks.contains(&0) {
            return Err(BenchError::Usage("block sizes must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks the rank grid against the loaded matrix.
    pub fn check_shape(&self, shape: (usize, usize)) -> Result<()> {
        let min = shape.0.min(shape.1);
        if let Some(&r) = self.ranks.iter().find(|&&r| r > min) {
            return Err(BenchError::Usage(format!(
                "rank {r} exceeds min(m, n) = {min}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_prefixes() {
        assert_eq!(
            "gen:lehmer:4".parse::<MatrixSource>().unwrap(),
            MatrixSource::Generator(GeneratorKind::Lehmer { n: 4 })
        );
        assert_eq!(
            "mm:/tmp/a.mtx".parse::<MatrixSource>().unwrap(),
            MatrixSource::File("/tmp/a.mtx".into())
        );
        assert!("lehmer:4".parse::<MatrixSource>().is_err());
        assert!("gen:lehmer:x".parse::<MatrixSource>().is_err());
    }

    #[test]
    fn rank_list_rules() {
        let src = MatrixSource::Generator(GeneratorKind::Lehmer { n: 10 });
        let mut cfg = ExperimentConfig::new(Experiment::FixedRank, src);
        assert!(cfg.validate().is_err());
        cfg.ranks = vec![5, 3];
        assert!(cfg.validate().is_err());
        cfg.ranks = vec![3, 5];
        assert!(cfg.validate().is_ok());
        assert!(cfg.check_shape((10, 4)).is_err());
        cfg.reps = 0;
        assert!(cfg.validate().is_err());
    }
}
