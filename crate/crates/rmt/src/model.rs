use serde::{Deserialize, Serialize};

use crate::RmtError;

/// Erdős–Rényi parameters. `q = √(pN)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self, RmtError> {
        if n == 0 {
            return Err(RmtError::Param("N must be positive".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(RmtError::Param(format!("edge probability {p} not in (0, 1)")));
        }
        Ok(Self { n, p, seed })
    }

    /// Parameters with `q = N^exponent`.
    pub fn with_q_exponent(n: usize, exponent: f64, seed: u64) -> Result<Self, RmtError> {
        let q = (n as f64).powf(exponent);
        Self::new(n, q * q / n as f64, seed)
    }

    pub fn q(&self) -> f64 {
        (self.p * self.n as f64).sqrt()
    }

    pub fn kappa4(&self) -> f64 {
        kappa4_bernoulli(self.p)
    }

    /// Where the parameters leave the regime the theory covers.
    pub fn warnings(&self) -> Vec<String> {
        let n = self.n as f64;
        let q = self.q();
        let mut w = Vec::new();
        if q < n.powf(1.0 / 6.0) {
            w.push(format!("q = {q:.3} below N^(1/6) = {:.3}", n.powf(1.0 / 6.0)));
        }
        if q > n.sqrt() {
            w.push(format!("q = {q:.3} above N^(1/2)"));
        }
        if self.kappa4() <= 0.0 {
            w.push(format!("kappa4 = {:.4} is not positive", self.kappa4()));
        }
        w
    }
}

/// Normalized fourth cumulant of a centered, rescaled Bernoulli(p) entry:
/// `c₄(h) = 3! κ₄ / (N q²)` gives `κ₄ = (1 - 6p + 6p²) / (6 (1 - p))`.
pub fn kappa4_bernoulli(p: f64) -> f64 {
    (1.0 - 6.0 * p + 6.0 * p * p) / (6.0 * (1.0 - p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa4_limits() {
        assert!((kappa4_bernoulli(1e-12) - 1.0 / 6.0).abs() < 1e-10);
        assert!((kappa4_bernoulli(0.5) + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_probability() {
        assert!(ModelParams::new(10, 1.0, 0).is_err());
        assert!(ModelParams::new(10, 0.0, 0).is_err());
        let m = ModelParams::with_q_exponent(1000, 0.3, 0).unwrap();
        assert!((m.q() - 1000f64.powf(0.3)).abs() < 1e-9);
        assert!(m.warnings().is_empty());
        // q = N^0.45 at N = 1000 means p ≈ 0.5, where κ₄ < 0.
        let dense = ModelParams::with_q_exponent(1000, 0.45, 0).unwrap();
        assert_eq!(dense.warnings().len(), 1);
        assert!(!ModelParams::new(4, 0.5, 0).unwrap().warnings().is_empty());
    }
}
