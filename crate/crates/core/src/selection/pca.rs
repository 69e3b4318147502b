//! Principal component analysis via symmetric eigendecomposition.
//!
//! Fits an orthonormal basis of directions with maximal sample variance and
//! projects rows onto it. The same [`LinearProjection`] container carries the
//! discriminant bases produced by the LDA module.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use nalgebra::{DMatrix, SymmetricEigen};

/// A fitted linear dimensionality reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProjection {
    /// Per-feature centering offsets (column means of the training data).
    pub mean: Vec<f64>,
    /// One direction per retained component, each of feature length,
    /// ordered by descending score.
    pub basis: Vec<Vec<f64>>,
    /// Per-component share of the total score (variance for PCA,
    /// discriminant criterion for LDA); zeros when the total vanishes.
    pub explained: Vec<f64>,
}

impl LinearProjection {
    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn n_components(&self) -> usize {
        self.basis.len()
    }

    /// Centers a row and projects it onto every component.
    pub fn project_row(&self, row: &[f64]) -> Vec<f64> {
        assert_eq!(row.len(), self.mean.len(), "row length mismatch");
        self.basis
            .iter()
            .map(|b| {
                row.iter()
                    .zip(&self.mean)
                    .zip(b)
                    .map(|((&x, &mu), &w)| (x - mu) * w)
                    .sum()
            })
            .collect()
    }

    /// Projects every row, failing on a feature-count mismatch.
    pub fn project_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        for row in rows {
            if row.len() != self.mean.len() {
                return Err(Error::Invalid(format!(
                    "projection expects {} features per row, got {}",
                    self.mean.len(),
                    row.len()
                )));
            }
        }
        Ok(rows.iter().map(|r| self.project_row(r)).collect())
    }
}

/// Flips each basis vector so its largest-magnitude entry is positive,
/// pinning the otherwise arbitrary eigenvector sign.
fn fix_signs(basis: &mut [Vec<f64>]) {
    for b in basis {
        let mut arg = 0;
        let mut best = f64::NEG_INFINITY;
        for (i, &v) in b.iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                arg = i;
            }
        }
        if b[arg] < 0.0 {
            for v in b.iter_mut() {
                *v = -*v;
            }
        }
    }
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// descending and sign-fixed eigenvectors as rows of the returned basis.
pub(crate) fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut basis: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    fix_signs(&mut basis);
    (values, basis)
}

/// Fits a `d`-component PCA on the matrix rows (labels are ignored).
///
/// Components are eigenvectors of the sample covariance, descending by
/// eigenvalue; `explained` holds each retained eigenvalue's fraction of the
/// total variance (negative eigenvalues from rounding are clamped to zero).
pub fn pca_fit(m: &LabeledFeatureMatrix, d: usize) -> Result<LinearProjection> {
    let (n, j) = (m.n_rows(), m.n_cols());
    if d == 0 || d > j {
        return Err(Error::Config(format!(
            "component count must lie in 1..={}, got {}",
            j, d
        )));
    }
    if n < 2 {
        return Err(Error::Invalid(
            "covariance needs at least 2 rows".into(),
        ));
    }
    let mean: Vec<f64> = (0..j)
        .map(|c| (0..n).map(|r| m.value(r, c)).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, j, |r, c| m.value(r, c) - mean[c]);
    let cov = centered.transpose() * &centered / (n - 1) as f64;
    let (values, mut basis) = sorted_symmetric_eigen(cov);
    let clamped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let explained: Vec<f64> = clamped
        .iter()
        .take(d)
        .map(|&v| if total > 0.0 { v / total } else { 0.0 })
        .collect();
    basis.truncate(d);
    Ok(LinearProjection { mean, basis, explained })
}

/// Projects rows with a fitted PCA (or any [`LinearProjection`]).
pub fn pca_transform(proj: &LinearProjection, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    proj.project_rows(rows)
}
