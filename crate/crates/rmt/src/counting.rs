//! Eigenvalue counts and their Poisson-kernel smoothings near the edge.

use std::f64::consts::PI;
use std::sync::Once;

use rgsl::{GaussKronrodRule, IntegrationWorkspace};
use serde::Serialize;

use crate::RmtError;

static GSL_HANDLER: Once = Once::new();

/// GSL aborts on errors unless told otherwise; we want error codes.
pub(crate) fn gsl_quiet() {
    GSL_HANDLER.call_once(|| {
        rgsl::error::set_error_handler_off();
    });
}

/// `#{k : lo ≤ λ_k ≤ hi}`.
pub fn count_in(eigs: &[f64], lo: f64, hi: f64) -> usize {
    eigs.iter().filter(|&&l| lo <= l && l <= hi).count()
}

/// `(N/π) Im m_N(y + iη) = (1/π) Σ_k η / ((λ_k - y)² + η²)`.
pub fn smoothed_density(eigs: &[f64], y: f64, eta: f64) -> f64 {
    eigs.iter().map(|&l| eta / ((l - y).powi(2) + eta * eta)).sum::<f64>() / PI
}

/// `(N/π) ∫_a^b Im m_N(y + iη) dy` by adaptive Gauss–Kronrod, split at the
/// eigenvalues inside the window so no peak is missed.
pub fn smoothed_count(eigs: &[f64], a: f64, b: f64, eta: f64) -> Result<f64, RmtError> {
    if !(a < b) || !(eta > 0.0) {
        return Err(RmtError::Param(format!("need a < b and eta > 0 (a = {a}, b = {b}, eta = {eta})")));
    }
    gsl_quiet();
    let mut cuts = vec![a];
    cuts.extend(eigs.iter().copied().filter(|&l| a < l && l < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    let mut ws = IntegrationWorkspace::new(2000).ok_or_else(|| RmtError::Quadrature("workspace".into()))?;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, _err) = ws
            .qag(|y| smoothed_density(eigs, y, eta), w[0], w[1], 1e-11, 1e-10, 2000, GaussKronrodRule::Gauss61)
            .map_err(|e| RmtError::Quadrature(format!("{e:?} on [{}, {}]", w[0], w[1])))?;
        total += v;
    }
    Ok(total)
}

/// Closed form of [`smoothed_count`]: `Σ_k [atan((b-λ_k)/η) - atan((a-λ_k)/η)] / π`.
pub fn smoothed_count_exact(eigs: &[f64], a: f64, b: f64, eta: f64) -> f64 {
    eigs.iter().map(|&l| ((b - l) / eta).atan() - ((a - l) / eta).atan()).sum::<f64>() / PI
}

/// Scales of the counting sandwich at size `N`, sparsity `q` and `ε`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SandwichScales {
    pub n: usize,
    pub eps: f64,
    /// `N^{-1+ε} + N^{2ε} q^{-4}`.
    pub eta: f64,
    /// `N^{6ε} η`.
    pub l: f64,
    /// Slack `N^{-ε}`.
    pub slack: f64,
    /// `E_L - L̂ = 4 N^{-2/3+ε}`.
    pub window: f64,
}

impl SandwichScales {
    pub fn new(n: usize, q: f64, eps: f64) -> Self {
        let nf = n as f64;
        let eta = nf.powf(-1.0 + eps) + nf.powf(2.0 * eps) * q.powi(-4);
        Self {
            n,
            eps,
            eta,
            l: nf.powf(6.0 * eps) * eta,
            slack: nf.powf(-eps),
            window: 4.0 * nf.powf(-2.0 / 3.0 + eps),
        }
    }
}

/// One evaluation of the sandwich at `E = L̂ + N^{-2/3} r`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SandwichPoint {
    pub r: f64,
    pub lower: f64,
    pub count: usize,
    pub upper: f64,
}

impl SandwichPoint {
    pub fn holds(&self) -> bool {
        self.lower <= self.count as f64 && self.count as f64 <= self.upper
    }
}

/// `Tr χ_{E+l}⋆θ_η - N^{-ε} ≤ 𝒩(E, ∞) ≤ Tr χ_{E-l}⋆θ_η + N^{-ε}` at every
/// `r` in `rs`, with smoothed traces by adaptive quadrature.
pub fn sandwich(eigs: &[f64], lhat: f64, s: &SandwichScales, rs: &[f64]) -> Result<Vec<SandwichPoint>, RmtError> {
    let e_l = lhat + s.window;
    let unit = (s.n as f64).powf(-2.0 / 3.0);
    rs.iter()
        .map(|&r| {
            let e = lhat + unit * r;
            Ok(SandwichPoint {
                r,
                lower: smoothed_count(eigs, e + s.l, e_l, s.eta)? - s.slack,
                count: eigs.iter().filter(|&&l| l >= e).count(),
                upper: smoothed_count(eigs, e - s.l, e_l, s.eta)? + s.slack,
            })
        })
        .collect()
}
