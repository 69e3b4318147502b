//! Distance-evaluation feature weighting.
//!
//! Each feature earns a raw score `(d_b / (d_w + eps)) * Rob`: separated
//! class centers and tight classes raise it, trend instability lowers it.
//! Scores are normalized to a maximum of 1 and thresholded into the selected
//! set. The conventional variant (CIDE) is the same computation with the
//! robustness factor disabled.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use crate::selection::distance::intra_inter;
use crate::selection::robustness::{per_feature_robustness, NormalizerMode};
use std::fmt::Write as _;

/// Guard against perfectly tight classes (`d_w = 0`).
const EPS: f64 = 1e-12;

/// Weighting stage configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    /// Selection cutoff on normalized weights, in [0, 1].
    pub threshold: f64,
    /// Width of the robustness trend smoother (odd).
    pub smoothing_window: usize,
    pub normalizer: NormalizerMode,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self { threshold: 0.92, smoothing_window: 5, normalizer: NormalizerMode::Std }
    }
}

/// Per-feature weights with their ingredients and the selected index set.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureWeights {
    /// Normalized weights in [0, 1]; the maximum is exactly 1.
    pub w: Vec<f64>,
    pub d_w: Vec<f64>,
    pub d_b: Vec<f64>,
    pub rob: Vec<f64>,
    pub threshold: f64,
    /// Sorted indices of features with `w >= threshold`.
    pub selected: Vec<usize>,
}

impl FeatureWeights {
    /// Indices selected at an arbitrary cutoff (not the stored one).
    pub fn select_at(&self, threshold: f64) -> Vec<usize> {
        (0..self.w.len()).filter(|&j| self.w[j] >= threshold).collect()
    }

    /// Delimited report: one row per feature with diagnostics and the
    /// selection flag.
    pub fn to_table(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.w.len(), "name count mismatch");
        let mut out = String::from("feature,d_w,d_b,rob,weight,selected\n");
        for (j, name) in names.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                name,
                self.d_w[j],
                self.d_b[j],
                self.rob[j],
                self.w[j],
                u8::from(self.selected.binary_search(&j).is_ok())
            );
        }
        out
    }
}

fn weights_impl(
    m: &LabeledFeatureMatrix,
    cfg: &WeightConfig,
    use_robustness: bool,
) -> Result<FeatureWeights> {
    if !(0.0..=1.0).contains(&cfg.threshold) {
        return Err(Error::Config(format!(
            "selection threshold must lie in [0, 1], got {}",
            cfg.threshold
        )));
    }
    let ii = intra_inter(m)?;
    let rob = if use_robustness {
        per_feature_robustness(m, cfg.smoothing_window, cfg.normalizer)?
    } else {
        vec![1.0; m.n_cols()]
    };
    let mut raw: Vec<f64> = ii
        .d_w
        .iter()
        .zip(&ii.d_b)
        .map(|(&dw, &db)| db / (dw + EPS))
        .collect();
    if use_robustness {
        for (r, &rb) in raw.iter_mut().zip(&rob) {
            *r *= rb;
        }
    }
    let max = raw.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Degenerate(
            "all feature scores are zero; classes are indistinguishable".into(),
        ));
    }
    let w: Vec<f64> = raw.iter().map(|r| r / max).collect();
    let selected: Vec<usize> = (0..w.len()).filter(|&j| w[j] >= cfg.threshold).collect();
    Ok(FeatureWeights {
        w,
        d_w: ii.d_w,
        d_b: ii.d_b,
        rob,
        threshold: cfg.threshold,
        selected,
    })
}

/// Robustness-improved distance-evaluation weights.
///
/// Expects a standardized matrix with at least two classes.
pub fn pide_weights(m: &LabeledFeatureMatrix, cfg: &WeightConfig) -> Result<FeatureWeights> {
    weights_impl(m, cfg, true)
}

/// Conventional distance-evaluation weights: the identical pipeline with the
/// robustness factor forced to 1.
pub fn cide_weights(m: &LabeledFeatureMatrix, threshold: f64) -> Result<FeatureWeights> {
    let cfg = WeightConfig { threshold, ..WeightConfig::default() };
    weights_impl(m, &cfg, false)
}
