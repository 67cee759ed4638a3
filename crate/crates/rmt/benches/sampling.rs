use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gft_rmt::experiment::sample_setting;
use gft_rmt::ModelParams;

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_setting");
    group.sample_size(10);
    for n in [200, 400] {
        let params = ModelParams::with_q_exponent(n, 0.45, 1).unwrap();
        for (label, parallel) in [("sequential", false), ("rayon", true)] {
            group.bench_with_input(BenchmarkId::new(label, n), &params, |b, p| {
                b.iter(|| sample_setting(p, 16, parallel).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sampling);
criterion_main!(benches);
