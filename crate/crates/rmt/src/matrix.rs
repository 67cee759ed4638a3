use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::model::ModelParams;

/// Dense symmetric matrix, full column-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.n]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + j * self.n] = v;
        self.data[j + i * self.n] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_faer(&self) -> faer::MatRef<'_, f64> {
        faer::MatRef::from_column_major_slice(&self.data, self.n, self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SymMatrix, b: f64) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        SymMatrix { n: self.n, data }
    }

    /// `Σ_{i,j} h_ij²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

/// Stream `stream` of the ChaCha generator keyed by `seed`. Distinct
/// samples use distinct streams, so results do not depend on scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `h_ij = (a_ij - p) / (q √(1-p))` with `a_ij ~ Bernoulli(p)` i.i.d. on and
/// above the diagonal.
pub fn sample_er(params: &ModelParams, stream: u64) -> SymMatrix {
    let n = params.n;
    let p = params.p;
    let scale = 1.0 / (params.q() * (1.0 - p).sqrt());
    let (hi, lo) = ((1.0 - p) * scale, -p * scale);
    let mut rng = rng_for(params.seed, stream);
    let mut h = SymMatrix::zeros(n);
    for j in 0..n {
        for i in 0..=j {
            h.set(i, j, if rng.random_bool(p) { hi } else { lo });
        }
    }
    h
}

/// Symmetric matrix with i.i.d. `N(0, 1/N)` entries on and above the
/// diagonal (all variances equal, unlike the usual GOE).
pub fn sample_goe_hat(n: usize, seed: u64, stream: u64) -> SymMatrix {
    let sd = 1.0 / (n as f64).sqrt();
    let mut rng = rng_for(seed, stream);
    let mut w = SymMatrix::zeros(n);
    for j in 0..n {
        for i in 0..=j {
            let x: f64 = rng.sample(StandardNormal);
            w.set(i, j, sd * x);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sampling_is_reproducible() {
        let m = ModelParams::new(4, 0.5, 42).unwrap();
        let a = sample_er(&m, 0);
        assert_eq!(a, sample_er(&m, 0));
        assert_ne!(a, sample_er(&m, 1));
        assert!(a.is_symmetric());
        // Entries take exactly two values, ±1/√(pN(1-p)) · (1-p or p).
        for j in 0..4 {
            for i in 0..4 {
                assert!((a.get(i, j).abs() - 0.5).abs() < 1e-15);
            }
        }
    }
}
