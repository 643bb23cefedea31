use crate::error::{Error, Result};
use crate::matcore::CoreFactorization;
use crate::sketch::sketch_rows;

/// Stopping and sizing parameters for one run.
///
/// `epsilon = 0` selects pure rank mode: the run stops only on `max_rank`,
/// an exhausted residual, or an exactly zero sketched residual.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingConfig {
    /// Target for `‖A - CUR‖_F / ‖A‖_F`.
    pub epsilon: f64,
    /// Block size.
    pub b: usize,
    /// Allowed overshoot: failure means true error above `(1 + delta) epsilon`.
    pub delta: f64,
    /// Failure probability for the risk-adjusted threshold.
    pub alpha: f64,
    /// Compare `ρ` against `ξ ε` instead of `ε`.
    pub risk_adjust: bool,
    /// Defaults to `min(m, n)`.
    pub max_rank: Option<usize>,
    /// Defaults to `⌈min(m, n) / b⌉ + 1`.
    pub max_iters: Option<usize>,
    /// Relative rank tolerance of the core; defaults to `1e-12 max(|I|, |J|)`.
    pub pinv_tol: Option<f64>,
    pub core: CoreFactorization,
}

impl StoppingConfig {
    pub fn new(epsilon: f64, b: usize) -> Self {
        Self {
            epsilon,
            b,
            delta: 0.0,
            alpha: 0.05,
            risk_adjust: false,
            max_rank: None,
            max_iters: None,
            pinv_tol: None,
            core: CoreFactorization::Qr,
        }
    }

    /// Pure rank mode: `epsilon = 0`, stop at `rank`.
    pub fn fixed_rank(b: usize, rank: usize) -> Self {
        Self {
            max_rank: Some(rank),
            ..Self::new(0.0, b)
        }
    }

    pub fn with_risk(mut self, delta: f64, alpha: f64) -> Self {
        self.delta = delta;
        self.alpha = alpha;
        self.risk_adjust = true;
        self
    }

    pub fn sketch_rows(&self) -> usize {
        sketch_rows(self.b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} must be finite and >= 0",
                self.epsilon
            )));
        }
        if self.b == 0 {
            return Err(Error::InvalidArgument(
                "block size must be at least 1".into(),
            ));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta {} must be >= 0",
                self.delta
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha {} must lie in (0, 1)",
                self.alpha
            )));
        }
        if self.risk_adjust {
            check_block_for_alpha(self.sketch_rows(), self.alpha)?;
        }
        if self.core == CoreFactorization::Lu {
            return Err(Error::NotImplemented("LU core factorization"));
        }
        Ok(())
    }

    /// The value `ρ` is compared against.
    pub fn threshold(&self) -> Result<f64> {
        if self.risk_adjust {
            adjusted_threshold(self.epsilon, self.delta, self.alpha, self.sketch_rows())
        } else {
            Ok(self.epsilon)
        }
    }
}

fn check_block_for_alpha(c: usize, alpha: f64) -> Result<()> {
    let min = -4.0 * alpha.ln();
    if (c as f64) <= min {
        return Err(Error::BlockTooSmallForAlpha { c, min });
    }
    Ok(())
}

/// `ξ ε` with `ξ = (1 + δ) sqrt(1 - 2 sqrt(-ln(α) / c))`.
///
/// Stopping once `ρ < ξ ε` leaves probability at most `α` that the true
/// relative error exceeds `(1 + δ) ε`. Requires `c > -4 ln α`.
pub fn adjusted_threshold(epsilon: f64, delta: f64, alpha: f64, c: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} must lie in (0, 1)"
        )));
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} must be >= 0"
        )));
    }
    check_block_for_alpha(c, alpha)?;
    let xi = (1.0 + delta) * (1.0 - 2.0 * (-alpha.ln() / c as f64).sqrt()).sqrt();
    Ok(xi * epsilon)
}

/// Upper bound on `Pr[‖G A‖_F <= ‖A‖_F / τ]` for a `c`-row Gaussian `G`
/// with variance `1/c` entries: `exp(-c (τ² - 1)² / (4 τ⁴))`.
pub fn gratton_tail(c: f64, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau <= 1.0 {
        return Err(Error::InvalidArgument(format!("tau {tau} must exceed 1")));
    }
    if c.is_nan() || c < 1.0 {
        return Err(Error::InvalidArgument(format!("c {c} must be at least 1")));
    }
    let t2 = tau * tau;
    Ok((-c * (t2 - 1.0).powi(2) / (4.0 * t2 * t2)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_to_minus_ten_at_c_100_divides_by_4_98() {
        let t = adjusted_threshold(1.0, 0.0, 1e-10, 100).unwrap();
        assert!((t - 0.2008).abs() < 5e-4, "{t}");
        assert_eq!(format!("{:.2}", 1.0 / t), "4.98");
    }

    #[test]
    fn closed_form_with_overshoot() {
        let got = adjusted_threshold(1e-4, 1.0, 0.01, 110).unwrap();
        let want = 1e-4 * 2.0 * (1.0 - 2.0 * (0.01f64.ln().abs() / 110.0).sqrt()).sqrt();
        assert_eq!(got, want);
        assert!(got > 0.0 && got < 2e-4);
    }

    #[test]
    fn threshold_vanishes_at_the_minimal_block() {
        let c = 100usize;
        let boundary = (-(c as f64) / 4.0).exp();
        assert!(adjusted_threshold(1.0, 0.0, boundary, c).is_err());
        let inside = (-(c as f64) / 4.0 * (1.0 - 1e-9)).exp();
        let t = adjusted_threshold(1.0, 0.0, inside, c).unwrap();
        assert!(t < 1e-3, "{t}");
        let err = adjusted_threshold(1.0, 0.0, 0.1, 9).unwrap_err();
        assert!(err.to_string().contains("block too small"));
    }

    #[test]
    fn tail_bound_values() {
        assert!((gratton_tail(4.0, 2f64.sqrt()).unwrap() - (-0.25f64).exp()).abs() < 1e-15);
        let t = gratton_tail(100.0, 2.0).unwrap();
        assert!((t - (-100.0 * 9.0 / 64.0f64).exp()).abs() < 1e-20);
        assert!((t - 7.8e-7).abs() < 1e-8);
        assert!(gratton_tail(10.0, 1.0 + 1e-9).unwrap() > 1.0 - 1e-12);
        assert!(gratton_tail(10.0, 1.0).is_err());
        assert!(gratton_tail(0.5, 2.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(StoppingConfig::new(1e-3, 5).validate().is_ok());
        assert!(StoppingConfig::new(-1.0, 5).validate().is_err());
        assert!(StoppingConfig::new(1e-3, 0).validate().is_err());
        // c = 5 cannot support alpha = 0.1 (needs c > 9.21)
        assert!(StoppingConfig::new(1e-3, 5)
            .with_risk(0.5, 0.1)
            .validate()
            .is_err());
        assert!(StoppingConfig::new(1e-3, 10)
            .with_risk(0.5, 0.1)
            .validate()
            .is_ok());
        let mut lu = StoppingConfig::new(1e-3, 5);
        lu.core = CoreFactorization::Lu;
        assert!(matches!(lu.validate(), Err(Error::NotImplemented(_))));
    }
}
