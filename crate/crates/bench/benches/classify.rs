//! Prediction latency of the weighted KNN on a fitted model.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use vibradiag::{wknn_fit, wknn_predict};
use vibradiag_bench::bench_matrix;

fn bench_classify(c: &mut Criterion) {
    let m = bench_matrix(3, 40, 16);
    let weights = vec![1.0; m.n_cols()];
    let model = wknn_fit(&m, &weights, 2).unwrap();
    let query: Vec<f64> = m.row(7).to_vec();
    c.bench_function("wknn_predict 120x16 k2", |b| {
        b.iter(|| wknn_predict(black_box(&model), black_box(&query)).unwrap())
    });
}

criterion_group!(benches, bench_classify);
criterion_main!(benches);
