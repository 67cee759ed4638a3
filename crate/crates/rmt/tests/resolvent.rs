use gft_rmt::flow::pairwise_trace_check;
use gft_rmt::green::stieltjes;
use gft_rmt::matrix::{sample_er, sample_goe_hat};
use gft_rmt::{green_eval_lu, m_sc, ModelParams, Spectral};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn ward_identity_on_sampled_resolvents() {
    let params = ModelParams::with_q_exponent(500, 0.45, 3).unwrap();
    let mut worst: f64 = 0.0;
    for s in 0..10 {
        let sp = Spectral::new(&sample_er(&params, s)).unwrap();
        for k in 0..10 {
            let e = -2.5 + 0.5 * k as f64 + 0.01 * s as f64;
            let g = sp.green(c(e, 1e-2), params.q()).unwrap();
            worst = worst.max(g.ward_residual());
            assert!(g.m_n.im > 0.0);
        }
    }
    assert!(worst < 1e-8, "worst Ward residual {worst}");
}

#[test]
fn semicircle_residual_on_domain_grid() {
    for i in 0..10 {
        for j in 0..10 {
            let z = c(-5.0 + 10.0 * i as f64 / 9.0, 3.0 * 10f64.powf(-6.0 * j as f64 / 9.0));
            let m = m_sc(z).unwrap();
            assert!(m.im > 0.0);
            let r = (1.0 + z * m + m * m).norm();
            assert!(r < 1e-12, "residual {r} at {z}");
        }
    }
    let m = m_sc(c(0.0, 2.0)).unwrap();
    assert!((m.im - (2f64.sqrt() - 1.0)).abs() < 1e-15 && m.re.abs() < 1e-15);
}

#[test]
fn stieltjes_positive_and_eta_monotone() {
    let params = ModelParams::with_q_exponent(300, 0.4, 8).unwrap();
    let eigs = gft_rmt::eigenvalues(&sample_er(&params, 0)).unwrap();
    for e in [-2.5, -1.0, 0.0, 1.9, 2.0, 2.1, 3.0] {
        let mut prev = 0.0;
        for k in 0..60 {
            let eta = 10f64.powf(-6.0 + 0.1 * k as f64);
            let m = stieltjes(&eigs, c(e, eta));
            assert!(m.im > 0.0);
            let v = eta * m.im;
            assert!(v >= prev, "η Im m_N decreased at E = {e}, η = {eta}");
            prev = v;
        }
    }
}

#[test]
fn spectral_factorization_matches_lu() {
    let h = sample_goe_hat(120, 9, 1);
    let sp = Spectral::new(&h).unwrap();
    for z in [c(0.0, 1e-3), c(2.0, 1e-2), c(-4.0, 1.0)] {
        let a = sp.green(z, 1.0).unwrap();
        let b = green_eval_lu(&h, z, 1.0).unwrap();
        let scale = 1.0 / z.im;
        for i in 0..120 {
            for j in 0..120 {
                assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-10 * scale);
            }
        }
        assert!((a.m_n - b.m_n).norm() < 1e-10 * scale);
    }
}

#[test]
fn pairwise_trace_identity() {
    let params = ModelParams::with_q_exponent(60, 0.4, 31).unwrap();
    let sp = Spectral::new(&sample_er(&params, 0)).unwrap();
    for (a, b) in [(0, 1), (3, 3), (7, 42)] {
        let (lhs, rhs) = pairwise_trace_check(&sp, a, b, 1.6, 2.4, 0.05, 24).unwrap();
        assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{a},{b}: {lhs} vs {rhs}");
    }
}

#[test]
fn local_law_band_small() {
    // Same band as the full check below, at N = 1000 with 20 samples.
    local_law(1000, 20);
}

#[test]
#[ignore = "N = 2000, 100 samples; several minutes"]
fn local_law_band_full() {
    local_law(2000, 100);
}

fn local_law(n: usize, samples: u64) {
    let params = ModelParams::with_q_exponent(n, 0.45, 41).unwrap();
    let z = c(1.0, (n as f64).powf(-0.5));
    let mut inside = 0;
    for s in 0..samples {
        let g = Spectral::new(&sample_er(&params, s)).unwrap().green(z, params.q()).unwrap();
        if g.local_law_deviation().unwrap() <= 10.0 * g.psi {
            inside += 1;
        }
    }
    assert!(inside as f64 >= 0.95 * samples as f64, "{inside} of {samples} inside 10Ψ");
}
