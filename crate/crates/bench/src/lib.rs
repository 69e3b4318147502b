//! Shared payload builders for the criterion benchmarks: a deterministic
//! test signal and a labeled feature matrix of realistic shape.

use rand::Rng;
use vibradiag::matrix::LabeledFeatureMatrix;
use vibradiag::rng::stream;

/// Deterministic multi-tone signal with additive noise, `n` samples long.
pub fn bench_window(n: usize) -> Vec<f64> {
    let mut rng = stream(42, "bench.window", 0);
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64;
            (2.0 * std::f64::consts::PI * 50.0 * t).sin()
                + 0.5 * (2.0 * std::f64::consts::PI * 120.0 * t).sin()
                + 0.1 * rng.random_range(-1.0..1.0)
        })
        .collect()
}

/// Labeled matrix with class-shifted Gaussian-ish columns, `classes *
/// rows_per_class` rows by `cols` features.
pub fn bench_matrix(classes: u32, rows_per_class: usize, cols: usize) -> LabeledFeatureMatrix {
    let mut rng = stream(42, "bench.matrix", 0);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for class in 1..=classes {
        for _ in 0..rows_per_class {
            rows.push(
                (0..cols)
                    .map(|j| {
                        let shift = f64::from(class) * ((j % 7) as f64) * 0.3;
                        shift + rng.random_range(-1.0..1.0)
                    })
                    .collect(),
            );
            labels.push(class);
        }
    }
    let names = (0..cols).map(|j| format!("f{j}")).collect();
    LabeledFeatureMatrix::new(rows, labels, names).expect("well-formed bench matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payloads_have_requested_shapes() {
        assert_eq!(bench_window(2048).len(), 2048);
        let m = bench_matrix(3, 40, 112);
        assert_eq!(m.n_rows(), 120);
        assert_eq!(m.n_cols(), 112);
        assert_eq!(m.classes(), vec![1, 2, 3]);
    }
}
