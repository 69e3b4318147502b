//! Throughput of the two signal transforms on a production-size window.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use vibradiag::transforms::{dwt_decompose, fft_magnitude, WaveletParams};
use vibradiag_bench::bench_window;

fn bench_transforms(c: &mut Criterion) {
    let window = bench_window(2048);
    c.bench_function("fft_magnitude 2048", |b| {
        b.iter(|| fft_magnitude(black_box(&window), 20_000.0).unwrap())
    });
    let params = WaveletParams::new("db10", 4).unwrap();
    c.bench_function("dwt_decompose db10x4 2048", |b| {
        b.iter(|| dwt_decompose(black_box(&window), &params).unwrap())
    });
}

criterion_group!(benches, bench_transforms);
criterion_main!(benches);
