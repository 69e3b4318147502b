//! Cost of the 16-statistic block and of the full 112-feature fusion.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use vibradiag::transforms::WaveletParams;
use vibradiag::{fuse, stat16};
use vibradiag_bench::bench_window;

fn bench_features(c: &mut Criterion) {
    let window = bench_window(2048);
    c.bench_function("stat16 2048", |b| {
        b.iter(|| stat16(black_box(&window)).unwrap())
    });
    let params = WaveletParams::new("db10", 4).unwrap();
    c.bench_function("fuse 112 features 2048", |b| {
        b.iter(|| fuse(black_box(&window), 20_000.0, &params).unwrap())
    });
}

criterion_group!(benches, bench_features);
criterion_main!(benches);
