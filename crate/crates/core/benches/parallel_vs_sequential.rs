//! Compares the rayon-parallel Monte Carlo driver against its
//! sequential twin on the same configuration; run with
//! `cargo bench` (parallel) and `cargo bench --no-default-features`
//! to time the pure sequential build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wiretap_evt::mc::{simulate_cdf, simulate_cdf_sequential, SimConfig};
use wiretap_evt::outage::SystemShape;

fn bench_simulation(c: &mut Criterion) {
    let shape = SystemShape::new(30, 30, 4, 1.0).unwrap();
    let mut group = c.benchmark_group("simulate_cdf");
    for trials in [1_000u64, 10_000] {
        let cfg = SimConfig::unconditional(shape, trials, 42);
        group.bench_with_input(BenchmarkId::new("parallel", trials), &cfg, |b, cfg| {
            b.iter(|| simulate_cdf(cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", trials), &cfg, |b, cfg| {
            b.iter(|| simulate_cdf_sequential(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_simulation);
criterion_main!(benches);
