//! Trend-robustness metric: how tightly a feature's values track their
//! smoothed trend within one operating condition. 1 means perfectly stable.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use serde::{Deserialize, Serialize};

/// Residual normalizer of the robustness metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizerMode {
    /// Per-series standard deviation (population form), the default.
    Std,
    /// Per-sample absolute value, as used in the trend-analysis literature.
    Relative,
}

/// Centered moving average whose window shrinks symmetrically at the edges.
pub fn moving_average(x: &[f64], window: usize) -> Vec<f64> {
    let h = window / 2;
    (0..x.len())
        .map(|k| {
            let lo = k.saturating_sub(h);
            let hi = (k + h).min(x.len() - 1);
            x[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Robustness of one ordered series:
/// `Rob = (1/K) * sum_k exp(-|x_k - trend_k| / scale_k)`.
///
/// The trend is a centered moving average of width `smoothing_window` (odd).
/// In `Std` mode the scale is the series' population standard deviation; a
/// zero scale means a constant series and yields exactly 1. In `Relative`
/// mode the scale is `|x_k|` per sample; a zero residual contributes 1 and a
/// nonzero residual at `x_k = 0` contributes 0.
pub fn robustness(x: &[f64], smoothing_window: usize, mode: NormalizerMode) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Invalid("robustness needs a non-empty series".into()));
    }
    if smoothing_window.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "smoothing window must be odd, got {smoothing_window}"
        )));
    }
    let k = x.len() as f64;
    let trend = moving_average(x, smoothing_window);
    match mode {
        NormalizerMode::Std => {
            let mean = x.iter().sum::<f64>() / k;
            let scale = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k).sqrt();
            if scale == 0.0 {
                return Ok(1.0);
            }
            Ok(x.iter()
                .zip(&trend)
                .map(|(v, t)| (-(v - t).abs() / scale).exp())
                .sum::<f64>()
                / k)
        }
        NormalizerMode::Relative => Ok(x
            .iter()
            .zip(&trend)
            .map(|(v, t)| {
                let r = (v - t).abs();
                if r == 0.0 {
                    1.0
                } else if *v == 0.0 {
                    0.0
                } else {
                    (-r / v.abs()).exp()
                }
            })
            .sum::<f64>()
            / k),
    }
}

/// Per-feature robustness of a labeled matrix: the metric is evaluated on
/// each class's sample sequence (dataset order) separately, then averaged
/// over classes. Trends are only meaningful within one condition, so classes
/// are never mixed into a single series.
pub fn per_feature_robustness(
    m: &LabeledFeatureMatrix,
    smoothing_window: usize,
    mode: NormalizerMode,
) -> Result<Vec<f64>> {
    let classes = m.classes();
    let per_class_rows: Vec<Vec<usize>> = classes.iter().map(|&c| m.class_rows(c)).collect();
    let mut out = Vec::with_capacity(m.n_cols());
    for j in 0..m.n_cols() {
        let mut total = 0.0;
        for rows in &per_class_rows {
            let series: Vec<f64> = rows.iter().map(|&i| m.value(i, j)).collect();
            total += robustness(&series, smoothing_window, mode)?;
        }
        out.push(total / classes.len() as f64);
    }
    Ok(out)
}
