//! Linear discriminant analysis via a ridge-regularized scatter whitening.
//!
//! Directions maximize between-class scatter relative to within-class
//! scatter. The generalized eigenproblem is reduced to a symmetric one with
//! a Cholesky factor of the ridged within scatter, so the returned basis is
//! scatter-conjugate: `w' (S_w + gamma I) w = 1` per component.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use crate::selection::pca::{sorted_symmetric_eigen, LinearProjection};
use nalgebra::{Cholesky, DMatrix, DVector};

/// Fits a `d`-component discriminant projection, `d <= classes - 1`.
///
/// The ridge is `1e-6 * trace(S_w) / n_features` (a tiny absolute floor when
/// the within scatter vanishes), keeping the whitening factor well posed.
pub fn lda_fit(m: &LabeledFeatureMatrix, d: usize) -> Result<LinearProjection> {
    let (n, j) = (m.n_rows(), m.n_cols());
    let classes = m.classes();
    let s = classes.len();
    if s < 2 {
        return Err(Error::Invalid(format!(
            "discriminant analysis needs at least 2 classes, got {}",
            s
        )));
    }
    let max_d = (s - 1).min(j);
    if d == 0 || d > max_d {
        return Err(Error::Config(format!(
            "component count must lie in 1..={} for {} classes and {} features, got {}",
            max_d, s, j, d
        )));
    }
    let mean: Vec<f64> = (0..j)
        .map(|c| (0..n).map(|r| m.value(r, c)).sum::<f64>() / n as f64)
        .collect();
    let mut s_w = DMatrix::zeros(j, j);
    let mut s_b = DMatrix::zeros(j, j);
    for &label in &classes {
        let rows = m.class_rows(label);
        let n_s = rows.len() as f64;
        let mu_s: Vec<f64> = (0..j)
            .map(|c| rows.iter().map(|&r| m.value(r, c)).sum::<f64>() / n_s)
            .collect();
        for &r in &rows {
            let diff = DVector::from_fn(j, |c, _| m.value(r, c) - mu_s[c]);
            s_w += &diff * diff.transpose();
        }
        let offset = DVector::from_fn(j, |c, _| mu_s[c] - mean[c]);
        s_b += (&offset * offset.transpose()) * n_s;
    }
    let trace: f64 = (0..j).map(|i| s_w[(i, i)]).sum();
    let gamma = if trace > 0.0 { 1e-6 * trace / j as f64 } else { 1e-12 };
    for i in 0..j {
        s_w[(i, i)] += gamma;
    }
    let chol = Cholesky::new(s_w).ok_or_else(|| {
        Error::Degenerate("within-class scatter is not positive definite".into())
    })?;
    let l = chol.l();
    // Whiten: M = L^-1 S_b L^-T, symmetrized against rounding drift.
    let y = l
        .solve_lower_triangular(&s_b)
        .ok_or_else(|| Error::Degenerate("singular whitening factor".into()))?;
    let m_whitened = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Degenerate("singular whitening factor".into()))?
        .transpose();
    let m_sym = (&m_whitened + m_whitened.transpose()) * 0.5;
    let (values, whitened_basis) = sorted_symmetric_eigen(m_sym);
    // Map eigenvectors back: w = L^-T v, then re-pin the sign convention in
    // the original feature space.
    let lt = l.transpose();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for v in whitened_basis.iter().take(d) {
        let col = DVector::from_column_slice(v);
        let w = lt
            .solve_upper_triangular(&col)
            .ok_or_else(|| Error::Degenerate("singular whitening factor".into()))?;
        basis.push(w.iter().copied().collect());
    }
    for b in &mut basis {
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
    let clamped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let explained: Vec<f64> = clamped
        .iter()
        .take(d)
        .map(|&v| if total > 0.0 { v / total } else { 0.0 })
        .collect();
    Ok(LinearProjection { mean, basis, explained })
}

/// Projects rows with a fitted discriminant basis.
pub fn lda_transform(proj: &LinearProjection, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    proj.project_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn recovers_axis_separated_direction() {
        // Two classes offset along the first axis with identical isotropic
        // within scatter: S_w = 2I, S_b = 32 e1 e1'. The discriminant is e1
        // scaled so w' (S_w + gamma I) w = 1, i.e. w ~ [1/sqrt(2), 0].
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![4.0, 0.0],
            vec![4.0, 1.0],
            vec![5.0, 0.0],
            vec![5.0, 1.0],
        ];
        let m = LabeledFeatureMatrix::from_rows(rows, vec![1, 1, 1, 1, 2, 2, 2, 2]).unwrap();
        let p = lda_fit(&m, 1).unwrap();
        assert_abs_diff_eq!(p.basis[0][0], 1.0 / 2.0_f64.sqrt(), epsilon = 1e-5);
        assert_abs_diff_eq!(p.basis[0][1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.explained[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // oracle keeps explicit indices
    fn basis_is_scatter_conjugate() {
        let mut rng = stream(11, "lda.test", 0);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let centers = [[0.0, 0.0, 0.0], [3.0, 1.0, -2.0], [-1.0, 4.0, 2.0]];
        for (ci, center) in centers.iter().enumerate() {
            for _ in 0..10 {
                rows.push(
                    center
                        .iter()
                        .map(|&c| c + 0.5 * rng.sample::<f64, _>(StandardNormal))
                        .collect::<Vec<f64>>(),
                );
                labels.push(ci as u32 + 1);
            }
        }
        let m = LabeledFeatureMatrix::from_rows(rows, labels).unwrap();
        let p = lda_fit(&m, 2).unwrap();
        // Rebuild the ridged within scatter and check w' A w = 1 and the
        // cross terms vanish.
        let j = 3;
        let mut s_w = vec![vec![0.0; j]; j];
        for &label in &m.classes() {
            let rows = m.class_rows(label);
            let n_s = rows.len() as f64;
            let mu: Vec<f64> = (0..j)
                .map(|c| rows.iter().map(|&r| m.value(r, c)).sum::<f64>() / n_s)
                .collect();
            for &r in &rows {
                for a in 0..j {
                    for b in 0..j {
                        s_w[a][b] += (m.value(r, a) - mu[a]) * (m.value(r, b) - mu[b]);
                    }
                }
            }
        }
        let trace: f64 = (0..j).map(|i| s_w[i][i]).sum();
        let gamma = 1e-6 * trace / j as f64;
        for (i, row) in s_w.iter_mut().enumerate() {
            row[i] += gamma;
        }
        for a in 0..2 {
            for b in 0..2 {
                let mut q = 0.0;
                for x in 0..j {
                    for y in 0..j {
                        q += p.basis[a][x] * s_w[x][y] * p.basis[b][y];
                    }
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(q, want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn projections_separate_classes() {
        let mut rng = stream(12, "lda.test", 1);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut labels = Vec::new();
        // Two informative dimensions plus four of pure noise.
        let centers = [[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]];
        for (ci, center) in centers.iter().enumerate() {
            for _ in 0..12 {
                let mut row: Vec<f64> = center
                    .iter()
                    .map(|&c| c + 0.4 * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                for _ in 0..4 {
                    row.push(2.0 * rng.sample::<f64, _>(StandardNormal));
                }
                rows.push(row);
                labels.push(ci as u32 + 1);
            }
        }
        let m = LabeledFeatureMatrix::from_rows(rows.clone(), labels.clone()).unwrap();
        let p = lda_fit(&m, 2).unwrap();
        let scores = lda_transform(&p, &rows).unwrap();
        // Nearest projected centroid classifies every training row.
        let mut centroids = Vec::new();
        for class in 1..=3u32 {
            let idx: Vec<usize> =
                (0..labels.len()).filter(|&i| labels[i] == class).collect();
            let c: Vec<f64> = (0..2)
                .map(|k| idx.iter().map(|&i| scores[i][k]).sum::<f64>() / idx.len() as f64)
                .collect();
            centroids.push(c);
        }
        for (i, s) in scores.iter().enumerate() {
            let nearest = (0..3)
                .min_by(|&a, &b| {
                    let da: f64 = (0..2).map(|k| (s[k] - centroids[a][k]).powi(2)).sum();
                    let db: f64 = (0..2).map(|k| (s[k] - centroids[b][k]).powi(2)).sum();
                    da.total_cmp(&db)
                })
                .unwrap();
            assert_eq!(nearest as u32 + 1, labels[i], "row {} misprojected", i);
        }
    }

    #[test]
    fn enforces_component_rank_bound() {
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|i| vec![i as f64, (i * i) as f64 * 0.1, (i as f64).sin(), 2.0, 0.5])
            .collect();
        let labels = vec![1, 1, 1, 2, 2, 2, 3, 3, 3];
        let m = LabeledFeatureMatrix::from_rows(rows, labels).unwrap();
        assert!(lda_fit(&m, 2).is_ok());
        assert!(lda_fit(&m, 3).is_err());
        assert!(lda_fit(&m, 0).is_err());
    }

    #[test]
    fn handles_zero_within_scatter() {
        // Constant rows per class: S_w = 0, so the ridge floor keeps the
        // factorization alive and the classes still project apart.
        let rows = vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![-1.0, 2.0],
            vec![-1.0, 2.0],
        ];
        let m = LabeledFeatureMatrix::from_rows(rows.clone(), vec![1, 1, 2, 2]).unwrap();
        let p = lda_fit(&m, 1).unwrap();
        let scores = lda_transform(&p, &rows).unwrap();
        assert!(p.basis[0].iter().all(|v| v.is_finite()));
        assert!((scores[0][0] - scores[2][0]).abs() > 1.0);
    }

    #[test]
    fn single_class_is_rejected() {
        let m = LabeledFeatureMatrix::from_rows(
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            vec![1, 1],
        )
        .unwrap();
        assert!(lda_fit(&m, 1).is_err());
    }
}
