//! Seeded corruption of a feature matrix for robustness experiments.
//!
//! A fixed fraction of rows and columns is drawn without replacement; every
//! selected cell is overwritten with a uniform draw from the column's
//! pre-injection two-sigma band. All other cells are left bit-identical.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use crate::rng::stream;
use rand::distr::{Distribution, Uniform};
use rand::seq::index;

/// Noise amount and seed for one injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Fraction of rows to corrupt, in [0, 1]; the count is rounded up.
    pub instance_ratio: f64,
    /// Fraction of columns to corrupt, in [0, 1]; the count is rounded up.
    pub feature_ratio: f64,
    pub seed: u64,
}

/// Which rows and columns were corrupted (each sorted ascending); the
/// touched cells are their Cartesian product.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TouchedCells {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl TouchedCells {
    pub fn count(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows.binary_search(&row).is_ok() && self.cols.binary_search(&col).is_ok()
    }
}

/// Returns the corrupted copy plus the log of touched cells.
///
/// Draw order is deterministic: row indices then column indices from one
/// seeded stream, then replacement values column by column (columns and rows
/// in ascending order) from a second stream.
pub fn inject_noise(
    m: &LabeledFeatureMatrix,
    spec: &NoiseSpec,
) -> Result<(LabeledFeatureMatrix, TouchedCells)> {
    for (name, r) in [
        ("instance_ratio", spec.instance_ratio),
        ("feature_ratio", spec.feature_ratio),
    ] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Config(format!("{name} must lie in [0, 1], got {r}")));
        }
    }
    let n = m.n_rows();
    let j = m.n_cols();
    let n_rows = ((spec.instance_ratio * n as f64).ceil() as usize).min(n);
    let n_cols = ((spec.feature_ratio * j as f64).ceil() as usize).min(j);
    if n_rows == 0 || n_cols == 0 {
        return Ok((m.clone(), TouchedCells::default()));
    }
    let mut pick = stream(spec.seed, "noise.cells", 0);
    let mut rows = index::sample(&mut pick, n, n_rows).into_vec();
    let mut cols = index::sample(&mut pick, j, n_cols).into_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    let mut out = m.clone();
    let mut values = stream(spec.seed, "noise.values", 0);
    for &c in &cols {
        let col = m.column(c);
        let mu = col.iter().sum::<f64>() / n as f64;
        let sigma = if n < 2 {
            0.0
        } else {
            (col.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
        };
        let band = Uniform::new_inclusive(mu - 2.0 * sigma, mu + 2.0 * sigma)
            .map_err(|e| Error::Invalid(format!("column {c} noise band: {e}")))?;
        for &r in &rows {
            out.set_value(r, c, band.sample(&mut values));
        }
    }
    Ok((out, TouchedCells { rows, cols }))
}
