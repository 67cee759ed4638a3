use gft_rmt::tw::SUPPORT;
use gft_rmt::{ks_one_sided, Tw1, Tw1Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

#[test]
fn doubling_nodes_is_converged() {
    let (a, b) = (Tw1::new(64), Tw1::new(128));
    let mut worst: f64 = 0.0;
    for r in grid(-5.0, 3.0, 0.25) {
        worst = worst.max((a.cdf(r).unwrap() - b.cdf(r).unwrap()).abs());
    }
    assert!(worst < 1e-8, "max change {worst}");
}

#[test]
fn limits_and_monotone_table() {
    let t = Tw1Table::new(&Tw1::new(48), SUPPORT.0, SUPPORT.1, 221).unwrap();
    let v = t.values();
    assert!(v[0] < 1e-10);
    assert!(1.0 - v[v.len() - 1] < 1e-10);
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
    assert!(Tw1::default().cdf(SUPPORT.0 - 0.1).is_err());
}

#[test]
fn right_tail_log_concave() {
    let (tw, hi) = (Tw1::new(64), Tw1::new(160));
    let rs = grid(1.0, 4.0, 0.25);
    let tail: Vec<f64> = rs.iter().map(|&r| 1.0 - tw.cdf(r).unwrap()).collect();
    for (r, t) in rs.iter().zip(&tail) {
        let reference = 1.0 - hi.cdf(*r).unwrap();
        assert!((t - reference).abs() < 1e-12 + 1e-8 * reference, "r = {r}");
    }
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
    let logs: Vec<f64> = tail.iter().map(|t| t.ln()).collect();
    for w in logs.windows(3) {
        assert!(w[0] + w[2] - 2.0 * w[1] < 0.0, "{w:?}");
    }
}

#[test]
fn harness_is_consistent_on_exact_samples() {
    let table = Tw1Table::new(&Tw1::new(64), SUPPORT.0, SUPPORT.1, 2201).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut distances = Vec::new();
    for m in [400, 1600, 6400] {
        let xs: Vec<f64> = (0..m).map(|_| table.quantile(rng.random::<f64>())).collect();
        let k = ks_one_sided(&xs, -4.0, |r| table.cdf(r)).unwrap();
        // DKW: P(√M · KS > 1.8) ≤ 2e^{-6.5}.
        assert!(k.distance * (m as f64).sqrt() < 1.8, "M = {m}: {k:?}");
        distances.push(k.distance);
    }
    assert!(distances[2] < distances[0], "{distances:?}");
}
