use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::householder::{self, Pivoting};
use crate::matcore::{DenseMatrix, MatrixHandle};
use crate::sketch::{derive_seed, gaussian_matrix};

/// Dynamic range of the default LowRankPD diagonal: `D(p, p) / D(1, 1)`.
pub const PD_DIAGONAL_RANGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// `G₁ G₂ᵀ` with standard normal `m x r` and `n x r` factors.
    LowRank {
        m: usize,
        n: usize,
        r: usize,
    },
    /// `G₁ G₂ᵀ + D` with `D(i, i) = decay^(i-1)`. `decay: None` picks the
    /// value giving `D(p, p) / D(1, 1) = 1e-12`, `p = min(m, n)`.
    LowRankPd {
        m: usize,
        n: usize,
        r: usize,
        decay: Option<f64>,
    },
    /// `A(i, j) = min(i + 1, j + 1) / max(i + 1, j + 1)`.
    Lehmer {
        n: usize,
    },
    /// `U diag(ratio^i) Vᵀ` with random orthogonal `U`, `V`.
    ExpDecay {
        n: usize,
        ratio: f64,
    },
    Identity {
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        Self { kind, seed }
    }
}

impl GeneratorKind {
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            GeneratorKind::LowRank { m, n, .. } | GeneratorKind::LowRankPd { m, n, .. } => (m, n),
            GeneratorKind::Lehmer { n }
            | GeneratorKind::ExpDecay { n, .. }
            | GeneratorKind::Identity { n } => (n, n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = self.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid dimensions {m}x{n}"
            )));
        }
        match *self {
            GeneratorKind::LowRank { r, .. } | GeneratorKind::LowRankPd { r, .. }
                if r == 0 || r > m.min(n) =>
            {
                Err(Error::InvalidArgument(format!(
                    "rank {r} must lie in 1..={}",
                    m.min(n)
                )))
            }
            GeneratorKind::LowRankPd { decay: Some(d), .. } if !(d > 0.0 && d < 1.0) => Err(
                Error::InvalidArgument(format!("decay {d} must lie in (0, 1)")),
            ),
            GeneratorKind::ExpDecay { ratio, .. } if !(ratio > 0.0 && ratio <= 1.0) => Err(
                Error::InvalidArgument(format!("ratio {ratio} must lie in (0, 1]")),
            ),
            _ => Ok(()),
        }
    }
}

/// Accepts `lowrank:M,N,R`, `lowrankpd:M,N,R[,DECAY]`, `lehmer:N`,
/// `expdecay:N,RATIO` and `identity:N`.
impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad generator spec '{s}'"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize> {
            args.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad)
        };
        let float =
            |i: usize| -> Result<f64> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad) };
        let kind = match (name.to_ascii_lowercase().as_str(), args.len()) {
            ("lowrank", 3) => GeneratorKind::LowRank {
                m: int(0)?,
                n: int(1)?,
                r: int(2)?,
            },
            ("lowrankpd", 3 | 4) => GeneratorKind::LowRankPd {
                m: int(0)?,
                n: int(1)?,
                r: int(2)?,
                decay: if args.len() == 4 {
                    Some(float(3)?)
                } else {
                    None
                },
            },
            ("lehmer", 1) => GeneratorKind::Lehmer { n: int(0)? },
            ("expdecay", 2) => GeneratorKind::ExpDecay {
                n: int(0)?,
                ratio: float(1)?,
            },
            ("identity", 1) => GeneratorKind::Identity { n: int(0)? },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Builds the matrix described by `spec`. Output is a pure function of the
/// spec, including its seed.
pub fn generate(spec: &GeneratorSpec) -> Result<MatrixHandle> {
    spec.kind.validate()?;
    let seed = spec.seed;
    let a = match spec.kind {
        GeneratorKind::LowRank { m, n, r } => low_rank(m, n, r, seed)?,
        GeneratorKind::LowRankPd { m, n, r, decay } => {
            let mut a = low_rank(m, n, r, seed)?;
            let p = m.min(n);
            let beta = decay.unwrap_or_else(|| default_decay(p));
            let mut d = 1.0;
            for i in 0..p {
                a.set(i, i, a.get(i, i) + d);
                d *= beta;
            }
            a
        }
        GeneratorKind::Lehmer { n } => {
            DenseMatrix::from_fn(n, n, |i, j| (i.min(j) + 1) as f64 / (i.max(j) + 1) as f64)
        }
        GeneratorKind::ExpDecay { n, ratio } => {
            let u = random_orthogonal(n, derive_seed(seed, 0));
            let v = random_orthogonal(n, derive_seed(seed, 1));
            let mut us = u;
            for i in 0..n {
                let mut s = 1.0;
                for x in us.row_mut(i) {
                    *x *= s;
                    s *= ratio;
                }
            }
            us.matmul_t(&v)?
        }
        GeneratorKind::Identity { n } => DenseMatrix::identity(n),
    };
    Ok(MatrixHandle::from(a))
}

/// `β` with `β^(p-1) = 1e-12`.
pub fn default_decay(p: usize) -> f64 {
    if p <= 1 {
        0.5
    } else {
        PD_DIAGONAL_RANGE.powf(1.0 / (p - 1) as f64)
    }
}

fn low_rank(m: usize, n: usize, r: usize, seed: u64) -> Result<DenseMatrix> {
    let g1 = gaussian_matrix(m, r, derive_seed(seed, 0));
    let g2 = gaussian_matrix(n, r, derive_seed(seed, 1));
    g1.matmul_t(&g2)
}

fn random_orthogonal(n: usize, seed: u64) -> DenseMatrix {
    let g = gaussian_matrix(n, n, seed);
    householder::factor(&g, n, Pivoting::None, |_, _| false).thin_q(n)
}
