//! Sequential vs parallel throughput of the Monte Carlo hot loops.
//!
//! With the `parallel` feature (default) the same workload runs once on a
//! one-thread pool and once on the default pool; built with
//! `--no-default-features` only the sequential driver exists. Run with
//! `cargo bench -p smldm-core`.

use criterion::{criterion_group, criterion_main, Criterion};
use smldm_core::model::{Layer, SystemConfig};
use smldm_core::montecarlo::{estimate_moments, spatial_mi_exact, RngSpec};
use smldm_core::sinr::SinrVector;

const MOMENT_TRIALS: u64 = 20_000;
const MI_SAMPLES: u64 = 100_000;

fn cfg() -> SystemConfig {
    SystemConfig::new(4, 4, 2, 5.0, 0.0, 20.0, 1.0).unwrap()
}

fn moments_once() -> f64 {
    let m = estimate_moments(Layer::Ml, &cfg(), MOMENT_TRIALS, &RngSpec::new(3, 0)).unwrap();
    m.combiner_norm[0]
}

fn mi_once() -> f64 {
    let s = SinrVector::uniform(Layer::Ml, 0.7, 4).unwrap();
    spatial_mi_exact(&s, MI_SAMPLES, &RngSpec::new(3, 0)).unwrap().mean
}

#[cfg(feature = "parallel")]
fn bench_with_pool(c: &mut Criterion, group: &str, f: fn() -> f64) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    g.bench_function("sequential-1-thread", |b| {
        b.iter(|| single.install(f));
    });
    g.bench_function("parallel-default-pool", |b| {
        b.iter(f);
    });
    g.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench_with_pool(c: &mut Criterion, group: &str, f: fn() -> f64) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(f);
    });
    g.finish();
}

fn moment_benches(c: &mut Criterion) {
    bench_with_pool(c, "estimate_moments/20k-trials", moments_once);
}

fn mi_benches(c: &mut Criterion) {
    bench_with_pool(c, "spatial_mi/100k-samples", mi_once);
}

criterion_group!(benches, moment_benches, mi_benches);
criterion_main!(benches);
