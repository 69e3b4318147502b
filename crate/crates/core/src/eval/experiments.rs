//! Threshold-sweep and noise-robustness experiments over a feature matrix.

use crate::classify::{cross_validate, CvConfig};
use crate::error::{Error, Result};
use crate::eval::noise::{inject_noise, NoiseSpec};
use crate::matrix::LabeledFeatureMatrix;
use crate::rng::derive_seed;
use crate::selection::lda::lda_fit;
use crate::selection::pca::pca_fit;
use crate::selection::robustness::per_feature_robustness;
use crate::selection::standardize::standardize;
use crate::selection::weights::{cide_weights, pide_weights, WeightConfig};
use crate::selection::SelectionMethod;
use std::fmt::Write as _;

/// One threshold setting: how many features survive it on the full data and
/// the cross-validated accuracy when selection is re-fit per fold.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    /// Features selected at this threshold on the full data.
    pub selected: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
}

/// Robustness of one method's output representation at one noise ratio,
/// aggregated over trials and features.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessRow {
    pub method: SelectionMethod,
    pub ratio: f64,
    pub mean: f64,
    pub std: f64,
}

/// The 51-point threshold grid 0.00, 0.02, ..., 1.00.
pub fn default_threshold_grid() -> Vec<f64> {
    (0..=50).map(|i| f64::from(i) / 50.0).collect()
}

/// The 10-point noise-ratio grid 0.001, 0.002, ..., 0.010.
pub fn default_ratio_grid() -> Vec<f64> {
    (1..=10).map(|i| f64::from(i) / 1000.0).collect()
}

/// Delimited rendering of sweep rows.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from("threshold,selected,mean_accuracy,std_accuracy\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.threshold, r.selected, r.mean_accuracy, r.std_accuracy
        );
    }
    out
}

/// Delimited rendering of robustness rows.
pub fn robustness_table(rows: &[RobustnessRow]) -> String {
    let mut out = String::from("method,ratio,mean,std\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.method, r.ratio, r.mean, r.std);
    }
    out
}

/// Evaluates a weighting method over a threshold grid.
///
/// Feature weights do not depend on the threshold, so the selected count per
/// row comes from one full-data weighting; accuracies re-run cross-validation
/// (selection re-fit per fold) with the same seed at every threshold.
pub fn threshold_sweep(
    m: &LabeledFeatureMatrix,
    thresholds: &[f64],
    cfg: &CvConfig,
) -> Result<Vec<SweepRow>> {
    if !matches!(cfg.method, SelectionMethod::Pide | SelectionMethod::Cide) {
        return Err(Error::Config(format!(
            "threshold sweep applies to weighting methods, not {}",
            cfg.method
        )));
    }
    if thresholds.is_empty() {
        return Err(Error::Config("empty threshold grid".into()));
    }
    for pair in thresholds.windows(2) {
        if pair[1] < pair[0] {
            return Err(Error::Config("thresholds must be sorted ascending".into()));
        }
    }
    if thresholds.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::Config("thresholds must lie in [0, 1]".into()));
    }
    let (z, _) = standardize(m);
    let weight_cfg = WeightConfig { threshold: 0.0, ..cfg.weight.clone() };
    let full = if cfg.method == SelectionMethod::Pide {
        pide_weights(&z, &weight_cfg)?
    } else {
        cide_weights(&z, 0.0)?
    };
    let mut rows = Vec::with_capacity(thresholds.len());
    let mut previous = usize::MAX;
    for &t in thresholds {
        let selected = full.select_at(t).len();
        assert!(
            selected <= previous,
            "selected count rose from {previous} to {selected} at threshold {t}"
        );
        previous = selected;
        let mut run_cfg = cfg.clone();
        run_cfg.weight.threshold = t;
        let cv = cross_validate(m, &run_cfg)?;
        rows.push(SweepRow {
            threshold: t,
            selected,
            mean_accuracy: cv.mean_accuracy,
            std_accuracy: cv.std_accuracy,
        });
    }
    Ok(rows)
}

/// Robustness values of one method's output representation on (possibly
/// noisy) data: selected standardized columns for the weighting methods,
/// projected components for PCA/LDA.
fn representation_robustness(
    m: &LabeledFeatureMatrix,
    method: SelectionMethod,
    cfg: &CvConfig,
) -> Result<Vec<f64>> {
    let (z, _) = standardize(m);
    let window = cfg.weight.smoothing_window;
    let mode = cfg.weight.normalizer;
    match method {
        SelectionMethod::Pide | SelectionMethod::Cide => {
            let fw = if method == SelectionMethod::Pide {
                pide_weights(&z, &cfg.weight)?
            } else {
                cide_weights(&z, cfg.weight.threshold)?
            };
            let picked = z.select_columns(&fw.selected)?;
            per_feature_robustness(&picked, window, mode)
        }
        SelectionMethod::Pca | SelectionMethod::Lda => {
            let proj = if method == SelectionMethod::Pca {
                pca_fit(&z, cfg.components)?
            } else {
                lda_fit(&z, cfg.components)?
            };
            let rows: Vec<Vec<f64>> =
                (0..z.n_rows()).map(|i| proj.project_row(z.row(i))).collect();
            let names: Vec<String> =
                (1..=proj.n_components()).map(|i| format!("c{i}")).collect();
            let comp = LabeledFeatureMatrix::new(rows, m.labels().to_vec(), names)?;
            per_feature_robustness(&comp, window, mode)
        }
        SelectionMethod::None => Err(Error::Config(
            "robustness experiment needs a selection method".into(),
        )),
    }
}

/// Repeated noise injections at each ratio, measuring how stable each
/// method's output representation stays.
///
/// Every trial derives its own seed; all methods see the same corrupted
/// matrix within a trial so the comparison is paired.
pub fn robustness_experiment(
    m: &LabeledFeatureMatrix,
    methods: &[SelectionMethod],
    ratios: &[f64],
    trials: usize,
    cfg: &CvConfig,
) -> Result<Vec<RobustnessRow>> {
    if methods.is_empty() || ratios.is_empty() {
        return Err(Error::Config("need at least one method and one ratio".into()));
    }
    if methods.contains(&SelectionMethod::None) {
        return Err(Error::Config(
            "robustness experiment needs a selection method".into(),
        ));
    }
    if ratios.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(Error::Config("noise ratios must lie in [0, 1)".into()));
    }
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); methods.len() * ratios.len()];
    for (ri, &ratio) in ratios.iter().enumerate() {
        for trial in 0..trials {
            let seed = derive_seed(
                cfg.seed,
                "robustness.trial",
                (ri * trials + trial) as u64,
            );
            let (noisy, _) = inject_noise(
                m,
                &NoiseSpec { instance_ratio: ratio, feature_ratio: ratio, seed },
            )?;
            for (mi, &method) in methods.iter().enumerate() {
                let vals = representation_robustness(&noisy, method, cfg)?;
                samples[mi * ratios.len() + ri].extend(vals);
            }
        }
    }
    let mut rows = Vec::with_capacity(samples.len());
    for (mi, &method) in methods.iter().enumerate() {
        for (ri, &ratio) in ratios.iter().enumerate() {
            let vals = &samples[mi * ratios.len() + ri];
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let std = if vals.len() < 2 {
                0.0
            } else {
                (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            };
            rows.push(RobustnessRow { method, ratio, mean, std });
        }
    }
    Ok(rows)
}
