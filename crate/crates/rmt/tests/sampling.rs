use gft_rmt::matrix::sample_er;
use gft_rmt::spectrum::{chi, edge_shift};
use gft_rmt::{kappa4_bernoulli, ModelParams, SymMatrix};
use proptest::prelude::*;

fn upper(h: &SymMatrix) -> impl Iterator<Item = f64> + '_ {
    (0..h.n()).flat_map(move |j| (0..=j).map(move |i| h.get(i, j)))
}

#[test]
fn entry_moments_within_clt_band() {
    let params = ModelParams::with_q_exponent(1000, 0.3, 5).unwrap();
    let n = params.n as f64;
    let h = sample_er(&params, 0);
    let xs: Vec<f64> = upper(&h).collect();
    let count = xs.len() as f64;

    // Exact fourth moment of (a - p)/(q√(1-p)).
    let p = params.p;
    let s4 = (params.q() * (1.0 - p).sqrt()).powi(4);
    let m4 = p * (1.0 - p) * ((1.0 - p).powi(3) + p.powi(3)) / s4;

    let mean = xs.iter().sum::<f64>() / count;
    let var = xs.iter().map(|x| x * x).sum::<f64>() / count;
    let se_mean = (1.0 / n / count).sqrt();
    let se_var = ((m4 - 1.0 / (n * n)) / count).sqrt();
    assert!(mean.abs() < 5.0 * se_mean, "mean {mean} se {se_mean}");
    assert!((var - 1.0 / n).abs() < 5.0 * se_var, "var {var} vs {} se {se_var}", 1.0 / n);
}

#[test]
fn monte_carlo_fourth_cumulant() {
    // c₄(h) = 3! κ₄ / (N q²), estimated from about 10⁷ entries in 80 batches.
    let params = ModelParams::new(500, 0.05, 17).unwrap();
    let n = params.n as f64;
    let q = params.q();
    let want = 6.0 * kappa4_bernoulli(params.p) / (n * q * q);
    let batches: Vec<f64> = (0..80)
        .map(|b| {
            let h = sample_er(&params, b);
            let xs: Vec<f64> = upper(&h).collect();
            let c = xs.len() as f64;
            let m2 = xs.iter().map(|x| x * x).sum::<f64>() / c;
            let m4 = xs.iter().map(|x| x.powi(4)).sum::<f64>() / c;
            m4 - 3.0 * m2 * m2
        })
        .collect();
    let k = batches.len() as f64;
    let est = batches.iter().sum::<f64>() / k;
    let sd = (batches.iter().map(|x| (x - est).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
    let se = sd / k.sqrt();
    assert!((est - want).abs() < 5.0 * se, "estimate {est} want {want} se {se}");
}

#[test]
fn random_shift_band() {
    // |χ| < 10/(q√N) in at least 99% of 10³ samples.
    let params = ModelParams::with_q_exponent(1000, 0.45, 23).unwrap();
    let band = 10.0 / (params.q() * (params.n as f64).sqrt());
    let inside = (0..1000).filter(|&s| chi(&sample_er(&params, s)).abs() < band).count();
    assert!(inside >= 990, "{inside} of 1000 inside the band");
}

#[test]
fn zero_matrix_shift() {
    let h = SymMatrix::zeros(3);
    let s = edge_shift(&h, 2.0, 0.0);
    // χ of the zero matrix is -1/N · N² / N = -1.
    assert_eq!(s.chi, -1.0);
    assert_eq!(s.lhat, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_matrices_are_symmetric_two_valued(n in 2usize..24, p in 0.01f64..0.99, seed: u64, stream in 0u64..1000) {
        let params = ModelParams::new(n, p, seed).unwrap();
        let h = sample_er(&params, stream);
        prop_assert!(h.is_symmetric());
        prop_assert_eq!(&h, &sample_er(&params, stream));
        let scale = params.q() * (1.0 - p).sqrt();
        for x in h.as_slice() {
            let a = x * scale + p;
            prop_assert!(a.abs() < 1e-12 || (a - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chi_is_centered_squares(n in 1usize..16, seed: u64) {
        let params = ModelParams::new(n, 0.4, seed).unwrap();
        let h = sample_er(&params, 0);
        let nf = n as f64;
        let direct = (h.frobenius_sq() - nf) / nf;
        prop_assert!((chi(&h) - direct).abs() < 1e-12);
    }
}
