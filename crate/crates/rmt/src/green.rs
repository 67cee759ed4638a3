use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::matrix::SymMatrix;
use crate::RmtError;

/// Stieltjes transform of the semicircle law: the root of
/// `1 + z m + m² = 0` with `Im m > 0`.
pub fn m_sc(z: Complex64) -> Result<Complex64, RmtError> {
    if !(z.im > 0.0) {
        return Err(RmtError::Domain(z));
    }
    // The roots multiply to 1. Take the larger one without cancellation,
    // then the other as its reciprocal.
    let r = (z * z - 4.0).sqrt();
    let big = if (z.conj() * r).re >= 0.0 { (-z - r) / 2.0 } else { (-z + r) / 2.0 };
    let small = 1.0 / big;
    Ok(if small.im > 0.0 { small } else { big })
}

/// `(1/N) Σ_k 1/(λ_k - z)`.
pub fn stieltjes(eigs: &[f64], z: Complex64) -> Complex64 {
    eigs.iter().map(|&l| 1.0 / (l - z)).sum::<Complex64>() / eigs.len() as f64
}

/// The resolvent `G = (H - z)^{-1}` at one spectral parameter.
#[derive(Clone, Debug)]
pub struct GreenEval {
    pub z: Complex64,
    n: usize,
    /// Full column-major storage.
    g: Vec<Complex64>,
    pub m_n: Complex64,
    /// `1/q + √(Im m_sc / (Nη)) + 1/(Nη)`.
    pub psi: f64,
}

impl GreenEval {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.g[i + j * self.n]
    }

    /// Relative gap in `(1/N) Σ_{jk} |G_jk|² = Im m_N / η`.
    pub fn ward_residual(&self) -> f64 {
        let lhs = self.g.iter().map(|x| x.norm_sqr()).sum::<f64>() / self.n as f64;
        let rhs = self.m_n.im / self.z.im;
        (lhs - rhs).abs() / rhs.abs()
    }

    /// `max_{ij} |G_ij - δ_ij m_sc(z)|`.
    pub fn local_law_deviation(&self) -> Result<f64, RmtError> {
        let msc = m_sc(self.z)?;
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            for i in 0..self.n {
                let d = if i == j { self.get(i, j) - msc } else { self.get(i, j) };
                worst = worst.max(d.norm());
            }
        }
        Ok(worst)
    }
}

fn psi(n: usize, z: Complex64, q: f64) -> Result<f64, RmtError> {
    let ne = n as f64 * z.im;
    Ok(1.0 / q + (m_sc(z)?.im / ne).sqrt() + 1.0 / ne)
}

/// Eigendecomposition `H = U Λ Uᵀ`, reusable across spectral parameters.
#[derive(Clone, Debug)]
pub struct Spectral {
    eigs: Vec<f64>,
    u: Mat<f64>,
}

impl Spectral {
    pub fn new(h: &SymMatrix) -> Result<Self, RmtError> {
        let evd = h.as_faer().self_adjoint_eigen(Side::Lower).map_err(|_| RmtError::Eigen)?;
        let eigs = (0..h.n()).map(|k| evd.S()[k]).collect();
        Ok(Self { eigs, u: evd.U().to_owned() })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigs
    }

    /// Column `j` of `G(z)`, `G_vj = Σ_k U_vk U_jk / (λ_k - z)`.
    pub fn column(&self, j: usize, z: Complex64) -> Result<Vec<Complex64>, RmtError> {
        if !(z.im > 0.0) {
            return Err(RmtError::Domain(z));
        }
        let n = self.eigs.len();
        let c: Vec<Complex64> = (0..n).map(|k| self.u[(j, k)] / (self.eigs[k] - z)).collect();
        Ok((0..n).map(|v| (0..n).map(|k| self.u[(v, k)] * c[k]).sum()).collect())
    }

    pub fn entry(&self, a: usize, b: usize, z: Complex64) -> Result<Complex64, RmtError> {
        if !(z.im > 0.0) {
            return Err(RmtError::Domain(z));
        }
        Ok((0..self.eigs.len()).map(|k| self.u[(a, k)] * self.u[(b, k)] / (self.eigs[k] - z)).sum())
    }

    /// `G = U diag(1/(λ - z)) Uᵀ`, assembled as two real products.
    pub fn green(&self, z: Complex64, q: f64) -> Result<GreenEval, RmtError> {
        if !(z.im > 0.0) {
            return Err(RmtError::Domain(z));
        }
        let n = self.eigs.len();
        let d: Vec<Complex64> = self.eigs.iter().map(|&l| 1.0 / (l - z)).collect();
        let ur = Mat::<f64>::from_fn(n, n, |i, k| self.u[(i, k)] * d[k].re);
        let ui = Mat::<f64>::from_fn(n, n, |i, k| self.u[(i, k)] * d[k].im);
        let re = &ur * self.u.transpose();
        let im = &ui * self.u.transpose();
        let mut g = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                g.push(Complex64::new(re[(i, j)], im[(i, j)]));
            }
        }
        Ok(GreenEval {
            z,
            n,
            g,
            m_n: d.iter().sum::<Complex64>() / n as f64,
            psi: psi(n, z, q)?,
        })
    }
}

pub fn green_eval(h: &SymMatrix, z: Complex64, q: f64) -> Result<GreenEval, RmtError> {
    Spectral::new(h)?.green(z, q)
}

/// `(H - z)^{-1}` by complex LU with partial pivoting. Slower, independent
/// of the eigensolver.
pub fn green_eval_lu(h: &SymMatrix, z: Complex64, q: f64) -> Result<GreenEval, RmtError> {
    if !(z.im > 0.0) {
        return Err(RmtError::Domain(z));
    }
    let n = h.n();
    let a = Mat::<Complex64>::from_fn(n, n, |i, j| {
        let v = Complex64::new(h.get(i, j), 0.0);
        if i == j {
            v - z
        } else {
            v
        }
    });
    let inv = a.partial_piv_lu().inverse();
    let mut g = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            g.push(inv[(i, j)]);
        }
    }
    let m_n = (0..n).map(|i| inv[(i, i)]).sum::<Complex64>() / n as f64;
    Ok(GreenEval {
        z,
        n,
        g,
        m_n,
        psi: psi(n, z, q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_closed_form() {
        let m = m_sc(Complex64::new(0.0, 2.0)).unwrap();
        assert!((m - Complex64::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-15);
        let z = Complex64::new(0.0, 1e6);
        assert!((m_sc(z).unwrap() * z + 1.0).norm() < 1e-9);
        assert!(m_sc(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn zero_matrix_resolvent() {
        let z = Complex64::new(0.3, 0.7);
        let g = green_eval(&SymMatrix::zeros(4), z, 2.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { -1.0 / z } else { Complex64::new(0.0, 0.0) };
                assert!((g.get(i, j) - want).norm() < 1e-15);
            }
        }
        assert!((g.m_n + 1.0 / z).norm() < 1e-15);
    }

    #[test]
    fn spectral_and_lu_agree() {
        let h = crate::matrix::sample_goe_hat(40, 3, 0);
        let z = Complex64::new(0.5, 0.05);
        let a = green_eval(&h, z, 2.0).unwrap();
        let b = green_eval_lu(&h, z, 2.0).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-10);
            }
        }
        assert!(a.ward_residual() < 1e-12);
    }
}
