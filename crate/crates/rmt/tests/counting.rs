use gft_rmt::counting::{count_in, sandwich, smoothed_count, smoothed_count_exact, SandwichScales};
use gft_rmt::matrix::sample_er;
use gft_rmt::spectrum::edge_shift;
use gft_rmt::{eigenvalues, ModelParams};

#[test]
fn total_mass_and_empty_window() {
    let params = ModelParams::with_q_exponent(400, 0.4, 2).unwrap();
    let eigs = eigenvalues(&sample_er(&params, 0)).unwrap();
    let all = smoothed_count(&eigs, -3.0, 3.0, 1e-2).unwrap();
    assert!((all - 400.0).abs() < 4.0, "{all}");
    assert_eq!(count_in(&eigs, -3.0, 3.0), 400);
    assert!(smoothed_count(&eigs, 4.0, 5.0, 1e-3).unwrap() < 1e-2);
}

#[test]
fn quadrature_tracks_closed_form_near_edge() {
    let params = ModelParams::with_q_exponent(500, 0.45, 6).unwrap();
    let eigs = eigenvalues(&sample_er(&params, 1)).unwrap();
    let s = SandwichScales::new(500, params.q(), 0.05);
    let top = eigs[eigs.len() - 1];
    let q = smoothed_count(&eigs, top - 0.1, top + 0.05, s.eta).unwrap();
    let x = smoothed_count_exact(&eigs, top - 0.1, top + 0.05, s.eta);
    assert!((q - x).abs() < 1e-7, "{q} vs {x}");
}

#[test]
fn sandwich_on_a_few_samples() {
    let params = ModelParams::with_q_exponent(500, 0.45, 4).unwrap();
    let s = SandwichScales::new(params.n, params.q(), 0.05);
    let rs: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
    for k in 0..5 {
        let h = sample_er(&params, k);
        let eigs = eigenvalues(&h).unwrap();
        let lhat = edge_shift(&h, params.q(), params.kappa4()).lhat;
        let pts = sandwich(&eigs, lhat, &s, &rs).unwrap();
        assert!(pts.iter().all(|p| p.lower <= p.upper));
    }
}
