//! The GOE Tracy–Widom distribution `F₁` as a Fredholm determinant,
//! `F₁(r) = det(I - K₁)` on `L²(r, ∞)` with `K₁(x, y) = ½ Ai((x + y)/2)`,
//! discretized by Gauss–Legendre Nyström.

use faer::Mat;
use rgsl::{IntegrationFixedType, IntegrationFixedWorkspace, Mode};

use crate::RmtError;

/// Arguments outside this range are refused.
pub const SUPPORT: (f64, f64) = (-10.0, 12.0);

#[derive(Clone, Debug)]
pub struct Tw1 {
    nodes: usize,
}

impl Default for Tw1 {
    fn default() -> Self {
        Self::new(96)
    }
}

impl Tw1 {
    pub fn new(nodes: usize) -> Self {
        assert!(nodes >= 4);
        Self { nodes }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// The kernel is below `Ai(12)/2 ≈ 1e-11` once `x + y ≥ 24`, so the
    /// half line is cut there (and at least 12 past `r`).
    fn interval(r: f64) -> (f64, f64) {
        (r, (24.0 - r).max(r + 12.0))
    }

    pub fn cdf(&self, r: f64) -> Result<f64, RmtError> {
        if !(SUPPORT.0..=SUPPORT.1).contains(&r) {
            return Err(RmtError::OutOfRange(r));
        }
        crate::counting::gsl_quiet();
        let (a, b) = Self::interval(r);
        let ws = IntegrationFixedWorkspace::new(IntegrationFixedType::legendre(), self.nodes, a, b, 0.0, 0.0)
            .ok_or_else(|| RmtError::Quadrature("Gauss-Legendre nodes".into()))?;
        let x = ws.nodes().ok_or_else(|| RmtError::Quadrature("nodes".into()))?;
        let w = ws.weights().ok_or_else(|| RmtError::Quadrature("weights".into()))?;
        let n = self.nodes;
        let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
        let m = Mat::<f64>::from_fn(n, n, |i, j| {
            let k = 0.5 * rgsl::airy::Ai(0.5 * (x[i] + x[j]), Mode::PrecDouble) * sw[i] * sw[j];
            if i == j {
                1.0 - k
            } else {
                -k
            }
        });
        let det = m.determinant();
        Ok(det.clamp(0.0, 1.0))
    }
}

/// `F₁` tabulated on a uniform grid, for fast monotone interpolation and
/// inversion.
#[derive(Clone, Debug)]
pub struct Tw1Table {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl Tw1Table {
    pub fn new(tw: &Tw1, lo: f64, hi: f64, points: usize) -> Result<Self, RmtError> {
        assert!(points >= 2 && lo < hi);
        let step = (hi - lo) / (points - 1) as f64;
        let mut values = Vec::with_capacity(points);
        for i in 0..points {
            let v = tw.cdf(lo + step * i as f64)?;
            // Rounding can break monotonicity by an ulp in the flat tails.
            values.push(values.last().map_or(v, |&p: &f64| v.max(p)));
        }
        Ok(Self { lo, step, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.lo + self.step * i as f64)
    }

    pub fn cdf(&self, r: f64) -> f64 {
        let t = (r - self.lo) / self.step;
        if t <= 0.0 {
            return self.values[0];
        }
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let f = t - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }

    /// Smallest grid-interpolated `r` with `F₁(r) ≥ u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let i = self.values.partition_point(|&v| v < u);
        if i == 0 {
            return self.lo;
        }
        if i >= self.values.len() {
            return self.lo + self.step * (self.values.len() - 1) as f64;
        }
        let (a, b) = (self.values[i - 1], self.values[i]);
        let f = if b > a { (u - a) / (b - a) } else { 0.0 };
        self.lo + self.step * ((i - 1) as f64 + f)
    }
}
