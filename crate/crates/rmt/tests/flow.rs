use gft_rmt::matrix::{sample_er, sample_goe_hat};
use gft_rmt::{FlowState, ModelParams};

fn state(n: usize) -> (FlowState, ModelParams) {
    let params = ModelParams::with_q_exponent(n, 0.4, 12).unwrap();
    let w = sample_goe_hat(n, 12, 1000);
    let h = sample_er(&params, 0);
    (FlowState::new(w, h, params.q(), params.kappa4()).unwrap(), params)
}

#[test]
fn starts_at_the_gaussian_matrix() {
    let (f, _) = state(50);
    let w = sample_goe_hat(50, 12, 1000);
    assert_eq!(f.matrix(0.0), w);
    assert_eq!(f.chi(0.0), 0.0);
    assert_eq!(f.lhat(0.0), 2.0);
}

#[test]
fn ends_at_the_sparse_matrix() {
    let (f, params) = state(50);
    let h = sample_er(&params, 0);
    let late = f.matrix(60.0);
    let gap = late.as_slice().iter().zip(h.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-12);
    let full = gft_rmt::edge_shift(&h, params.q(), params.kappa4());
    assert!((f.lhat(60.0) - full.lhat).abs() < 1e-12);
}

#[test]
fn observable_two_ways() {
    let (f, params) = state(200);
    let n = params.n as f64;
    let eta = n.powf(-0.9);
    for t in [0.0, 0.3, 2.0] {
        let x = f.observable(t, -3.0 * n.powf(-2.0 / 3.0), 4.0 * n.powf(-2.0 / 3.0), eta).unwrap();
        assert!((x.quadrature - x.exact).abs() < 1e-7 * (1.0 + x.exact.abs()), "{x:?}");
        let empty = f.observable(t, 0.1, 0.1, eta).unwrap();
        assert_eq!((empty.quadrature, empty.exact), (0.0, 0.0));
    }
    assert!(f.observable(0.0, 0.2, 0.1, eta).is_err());
}
