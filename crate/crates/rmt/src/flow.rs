//! Matrix interpolation `H(t) = e^{-t/2} W + √(1-e^{-t}) H` between a
//! Gaussian start and the sparse target, and the windowed observable `X(t)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::counting::{smoothed_count, smoothed_count_exact};
use crate::green::Spectral;
use crate::matrix::SymMatrix;
use crate::spectrum::chi;
use crate::RmtError;

#[derive(Clone, Debug)]
pub struct FlowState {
    w: SymMatrix,
    h: SymMatrix,
    q: f64,
    kappa4: f64,
}

/// `X(t)` by quadrature and in closed form.
#[derive(Clone, Copy, Debug)]
pub struct Observable {
    pub t: f64,
    pub lhat: f64,
    pub quadrature: f64,
    pub exact: f64,
}

impl FlowState {
    pub fn new(w: SymMatrix, h: SymMatrix, q: f64, kappa4: f64) -> Result<Self, RmtError> {
        if w.n() != h.n() {
            return Err(RmtError::Param(format!("W is {}x{}, H is {}x{}", w.n(), w.n(), h.n(), h.n())));
        }
        Ok(Self { w, h, q, kappa4 })
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn matrix(&self, t: f64) -> SymMatrix {
        self.w.combine((-t / 2.0).exp(), &self.h, (-(-t).exp_m1()).sqrt())
    }

    /// `χ(t) = (1 - e^{-t}) χ(H)`.
    pub fn chi(&self, t: f64) -> f64 {
        -(-t).exp_m1() * chi(&self.h)
    }

    /// `L̂_t = 2 + 6κ₄(1 - e^{-t})²/q² + χ(t)`.
    pub fn lhat(&self, t: f64) -> f64 {
        let s = -(-t).exp_m1();
        2.0 + 6.0 * self.kappa4 * s * s / (self.q * self.q) + self.chi(t)
    }

    /// `X(t) = N ∫_{γ₁}^{γ₂} Im m_N(t, L̂_t + x + iη) dx`.
    pub fn observable(&self, t: f64, gamma1: f64, gamma2: f64, eta: f64) -> Result<Observable, RmtError> {
        if !(gamma1 <= gamma2) || !(eta > 0.0) {
            return Err(RmtError::Param(format!("need γ₁ ≤ γ₂ and η > 0 (γ₁ = {gamma1}, γ₂ = {gamma2}, η = {eta})")));
        }
        let lhat = self.lhat(t);
        let eigs = crate::spectrum::eigenvalues(&self.matrix(t))?;
        let (a, b) = (lhat + gamma1, lhat + gamma2);
        let (quadrature, exact) = if a == b {
            (0.0, 0.0)
        } else {
            (PI * smoothed_count(&eigs, a, b, eta)?, PI * smoothed_count_exact(&eigs, a, b, eta))
        };
        Ok(Observable {
            t,
            lhat,
            quadrature,
            exact,
        })
    }
}

/// Both sides of `Σ_v ∫_{E₁}^{E₂} Im[G_va G_bv](x + iη) dx = Im G_ab(E₂ + iη) - Im G_ab(E₁ + iη)`.
/// The left side uses Gauss–Legendre on a grid refined near the eigenvalues
/// in the window; `nodes` is per subinterval.
pub fn pairwise_trace_check(
    s: &Spectral,
    a: usize,
    b: usize,
    e1: f64,
    e2: f64,
    eta: f64,
    nodes: usize,
) -> Result<(f64, f64), RmtError> {
    crate::counting::gsl_quiet();
    let integrand = |x: f64| -> Result<f64, RmtError> {
        let z = Complex64::new(x, eta);
        let ga = s.column(a, z)?;
        let gb = s.column(b, z)?;
        Ok(ga.iter().zip(&gb).map(|(p, q)| (p * q).im).sum())
    };

    // Breakpoints every η/2 within 4η of each eigenvalue.
    let mut cuts = vec![e1, e2];
    for &l in s.eigenvalues() {
        for k in -8..=8 {
            let c = l + k as f64 * eta / 2.0;
            if e1 < c && c < e2 {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut lhs = 0.0;
    for w in cuts.windows(2) {
        let ws = rgsl::IntegrationFixedWorkspace::new(rgsl::IntegrationFixedType::legendre(), nodes, w[0], w[1], 0.0, 0.0)
            .ok_or_else(|| RmtError::Quadrature("Gauss-Legendre nodes".into()))?;
        let xs = ws.nodes().ok_or_else(|| RmtError::Quadrature("nodes".into()))?;
        let wt = ws.weights().ok_or_else(|| RmtError::Quadrature("weights".into()))?;
        for (x, w) in xs.iter().zip(wt) {
            lhs += w * integrand(*x)?;
        }
    }
    let rhs = s.entry(a, b, Complex64::new(e2, eta))?.im - s.entry(a, b, Complex64::new(e1, eta))?.im;
    Ok((lhs, rhs))
}
