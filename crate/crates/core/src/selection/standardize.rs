//! Per-feature z-scoring. Distance-based weighting and KNN are meaningless
//! on raw features whose magnitudes differ by orders, so every selection and
//! classification stage standardizes first with parameters captured from
//! training data only.

use crate::matrix::LabeledFeatureMatrix;

/// Column means and standard deviations captured from a training matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub mean: Vec<f64>,
    /// Sample standard deviation (N-1 denominator) per column.
    pub std: Vec<f64>,
    /// Columns with exactly zero spread; they map to all zeros.
    pub degenerate: Vec<bool>,
}

impl Standardization {
    /// Apply the captured parameters to one raw row.
    ///
    /// Degenerate columns map to 0. Non-finite inputs propagate so sentinel
    /// values planted by leakage tests stay visible downstream.
    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        assert_eq!(row.len(), self.mean.len(), "row dimension mismatch");
        row.iter()
            .enumerate()
            .map(|(j, &x)| {
                if self.degenerate[j] {
                    0.0
                } else {
                    (x - self.mean[j]) / self.std[j]
                }
            })
            .collect()
    }
}

/// Z-score every column using its own mean and sample standard deviation.
/// Zero-spread columns become all zeros and are flagged.
pub fn standardize(m: &LabeledFeatureMatrix) -> (LabeledFeatureMatrix, Standardization) {
    let n = m.n_rows();
    let j = m.n_cols();
    let nf = n as f64;
    let mut mean = vec![0.0; j];
    let mut std = vec![0.0; j];
    let mut degenerate = vec![false; j];
    for c in 0..j {
        let col = m.column(c);
        let mu = col.iter().sum::<f64>() / nf;
        let sd = if n < 2 {
            0.0
        } else {
            (col.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
        };
        mean[c] = mu;
        std[c] = sd;
        degenerate[c] = sd == 0.0;
    }
    let params = Standardization { mean, std, degenerate };
    let rows: Vec<Vec<f64>> = (0..n).map(|i| params.apply_row(m.row(i))).collect();
    let out = LabeledFeatureMatrix::new_unchecked(rows, m.labels().to_vec(), m.names().to_vec())
        .expect("shape preserved");
    (out, params)
}
