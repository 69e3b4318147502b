//! Per-feature class-separability distances: mean pairwise spread inside
//! each class and mean distance between class centers.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;

/// Intra-class (`d_w`) and inter-class (`d_b`) distance per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct IntraInter {
    pub d_w: Vec<f64>,
    pub d_b: Vec<f64>,
}

/// Compute both distances for every feature column.
///
/// `d_w[j]` averages, over classes, the mean absolute difference across all
/// ordered within-class sample pairs; single-sample classes contribute 0.
/// `d_b[j]` averages the absolute difference of class means over all
/// unordered class pairs. Summation order is the plain nested loop in row
/// order, so an independent brute-force oracle can match it exactly.
pub fn intra_inter(m: &LabeledFeatureMatrix) -> Result<IntraInter> {
    let classes = m.classes();
    let s = classes.len();
    if s < 2 {
        return Err(Error::Invalid("distance evaluation needs at least 2 classes".into()));
    }
    let per_class_rows: Vec<Vec<usize>> = classes.iter().map(|&c| m.class_rows(c)).collect();
    let j = m.n_cols();
    let mut d_w = vec![0.0; j];
    let mut d_b = vec![0.0; j];
    for f in 0..j {
        let mut within = 0.0;
        for rows in &per_class_rows {
            let ns = rows.len();
            if ns <= 1 {
                continue;
            }
            let mut sum = 0.0;
            for &a in rows {
                for &b in rows {
                    if a != b {
                        sum += (m.value(a, f) - m.value(b, f)).abs();
                    }
                }
            }
            within += sum / (ns * (ns - 1)) as f64;
        }
        d_w[f] = within / s as f64;

        let means: Vec<f64> = per_class_rows
            .iter()
            .map(|rows| rows.iter().map(|&i| m.value(i, f)).sum::<f64>() / rows.len() as f64)
            .collect();
        let mut between = 0.0;
        for a in 0..s {
            for b in a + 1..s {
                between += (means[a] - means[b]).abs();
            }
        }
        d_b[f] = between / (s * (s - 1) / 2) as f64;
    }
    Ok(IntraInter { d_w, d_b })
}
