//! Weighted KNN classification and stratified cross-validation.
//!
//! The classifier standardizes training data internally, measures weighted
//! Euclidean distance `h_i = sqrt(sum_j w_j (x_j - y_ij)^2)`, and votes each
//! of the `k` nearest neighbors with mass `1/(h_i + 1e-12)`. Cross-validation
//! fits the whole selection stage (standardization, weighting or projection)
//! on the training folds only, so held-out rows never influence it.

use crate::error::{Error, Result};
use crate::matrix::LabeledFeatureMatrix;
use crate::rng::stream;
use crate::selection::lda::lda_fit;
use crate::selection::pca::{pca_fit, LinearProjection};
use crate::selection::standardize::{standardize, Standardization};
use crate::selection::weights::{cide_weights, pide_weights, WeightConfig};
use crate::selection::SelectionMethod;
use rand::seq::SliceRandom;
use std::fmt::Write as _;

/// Vote-mass floor so exact neighbors dominate without dividing by zero.
const VOTE_DELTA: f64 = 1e-12;

/// A fitted weighted-KNN classifier.
///
/// Training rows are stored standardized; queries are standardized with the
/// captured parameters before distances are measured.
#[derive(Debug, Clone, PartialEq)]
pub struct WknnModel {
    names: Vec<String>,
    weights: Vec<f64>,
    k: usize,
    standardization: Standardization,
    train_x: Vec<Vec<f64>>,
    train_y: Vec<u32>,
    classes: Vec<u32>,
}

/// One classified query: the winning label plus the normalized per-class
/// vote masses (aligned with `classes`, summing to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: u32,
    pub classes: Vec<u32>,
    pub scores: Vec<f64>,
}

impl WknnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Sorted distinct training labels; `Prediction.scores` aligns to this.
    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn feature_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_train(&self) -> usize {
        self.train_x.len()
    }

    /// Standardized training rows (used by leakage diagnostics).
    pub fn train_rows(&self) -> &[Vec<f64>] {
        &self.train_x
    }

    /// Self-describing text form: header lines with the hyperparameters and
    /// standardization, then one `label,values...` line per training row.
    pub fn to_text(&self) -> String {
        for n in &self.names {
            assert!(
                !n.contains(',') && !n.contains('\n'),
                "feature name {n:?} not serializable"
            );
        }
        let join = |v: &[f64]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        let mut out = String::from("format,wknn-model-v1\n");
        let _ = writeln!(out, "k,{}", self.k);
        let _ = writeln!(out, "features,{}", self.names.join(","));
        let _ = writeln!(out, "weights,{}", join(&self.weights));
        let _ = writeln!(out, "mean,{}", join(&self.standardization.mean));
        let _ = writeln!(out, "std,{}", join(&self.standardization.std));
        let _ = writeln!(
            out,
            "degenerate,{}",
            self.standardization
                .degenerate
                .iter()
                .map(|&d| if d { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(",")
        );
        let _ = writeln!(out, "rows,{}", self.train_x.len());
        for (row, &label) in self.train_x.iter().zip(&self.train_y) {
            let _ = writeln!(out, "{},{}", label, join(row));
        }
        out
    }

    /// Parse the [`to_text`](Self::to_text) form back into a model.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut expect = |key: &str| -> Result<Vec<String>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("model text ended before {key}")))?;
            let mut cells = line.split(',');
            let head = cells.next().unwrap_or_default();
            if head != key {
                return Err(Error::Parse(format!(
                    "expected model field {key}, found {head}"
                )));
            }
            Ok(cells.map(str::to_string).collect())
        };
        let version = expect("format")?;
        if version != ["wknn-model-v1"] {
            return Err(Error::Parse(format!("unknown model format {version:?}")));
        }
        let parse_f64s = |cells: Vec<String>, key: &str| -> Result<Vec<f64>> {
            cells
                .iter()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number {c:?} in {key}")))
                })
                .collect()
        };
        let k_cells = expect("k")?;
        let k: usize = k_cells
            .first()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse("bad neighbor count".into()))?;
        let names = expect("features")?;
        let weights = parse_f64s(expect("weights")?, "weights")?;
        let mean = parse_f64s(expect("mean")?, "mean")?;
        let std = parse_f64s(expect("std")?, "std")?;
        let degenerate: Vec<bool> = expect("degenerate")?
            .iter()
            .map(|c| match c.as_str() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Parse(format!("bad degenerate flag {other:?}"))),
            })
            .collect::<Result<_>>()?;
        let n_rows: usize = expect("rows")?
            .first()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse("bad training row count".into()))?;
        let mut train_x = Vec::with_capacity(n_rows);
        let mut train_y = Vec::with_capacity(n_rows);
        for i in 0..n_rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing training row {i}")))?;
            let mut cells = line.split(',');
            let label: u32 = cells
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad label in training row {i}")))?;
            let row: Vec<f64> = cells
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad value in training row {i}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != names.len() {
                return Err(Error::Parse(format!(
                    "training row {i} has {} values, expected {}",
                    row.len(),
                    names.len()
                )));
            }
            train_x.push(row);
            train_y.push(label);
        }
        if [weights.len(), mean.len(), std.len(), degenerate.len()]
            .iter()
            .any(|&l| l != names.len())
        {
            return Err(Error::Parse("model field lengths disagree".into()));
        }
        let mut classes = train_y.clone();
        classes.sort_unstable();
        classes.dedup();
        let model = Self {
            names,
            weights,
            k,
            standardization: Standardization { mean, std, degenerate },
            train_x,
            train_y,
            classes,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.train_x.is_empty() || self.names.is_empty() {
            return Err(Error::Invalid("classifier needs training rows and features".into()));
        }
        if self.k == 0 || self.k > self.train_x.len() {
            return Err(Error::Invalid(format!(
                "neighbor count must lie in 1..={}, got {}",
                self.train_x.len(),
                self.k
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Invalid("feature weights must be finite and non-negative".into()));
        }
        if !self.weights.iter().any(|&w| w > 0.0) {
            return Err(Error::Invalid("all feature weights are zero".into()));
        }
        Ok(())
    }
}

/// Fits the lazy classifier: captures standardization from the matrix,
/// stores standardized rows, and validates the weight/neighbor contract.
pub fn wknn_fit(m: &LabeledFeatureMatrix, weights: &[f64], k: usize) -> Result<WknnModel> {
    if weights.len() != m.n_cols() {
        return Err(Error::Invalid(format!(
            "{} weights for {} features",
            weights.len(),
            m.n_cols()
        )));
    }
    let (z, standardization) = standardize(m);
    let train_x: Vec<Vec<f64>> = (0..z.n_rows()).map(|i| z.row(i).to_vec()).collect();
    let model = WknnModel {
        names: m.names().to_vec(),
        weights: weights.to_vec(),
        k,
        standardization,
        train_x,
        train_y: m.labels().to_vec(),
        classes: m.classes(),
    };
    model.validate()?;
    Ok(model)
}

/// Classifies one raw query row.
pub fn wknn_predict(model: &WknnModel, x: &[f64]) -> Result<Prediction> {
    if x.len() != model.names.len() {
        return Err(Error::Invalid(format!(
            "query has {} features, model expects {}",
            x.len(),
            model.names.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("query contains non-finite values".into()));
    }
    let q = model.standardization.apply_row(x);
    let mut dist: Vec<(f64, usize)> = model
        .train_x
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let h = q
                .iter()
                .zip(row)
                .zip(&model.weights)
                .map(|((&a, &b), &w)| w * (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            (h, i)
        })
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = vec![0.0; model.classes.len()];
    for &(h, i) in dist.iter().take(model.k) {
        let class = model.train_y[i];
        let slot = model.classes.binary_search(&class).expect("trained class");
        votes[slot] += 1.0 / (h + VOTE_DELTA);
    }
    let total: f64 = votes.iter().sum();
    let scores: Vec<f64> = votes.iter().map(|v| v / total).collect();
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(Prediction {
        label: model.classes[best],
        classes: model.classes.clone(),
        scores,
    })
}

/// Cross-validation configuration: the selection method fitted per fold plus
/// classifier and fold parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub method: SelectionMethod,
    /// Weighting parameters (threshold, smoothing) for `pide`/`cide`.
    pub weight: WeightConfig,
    /// Retained component count for `pca`/`lda`.
    pub components: usize,
    /// Neighbor count.
    pub k: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            method: SelectionMethod::Pide,
            weight: WeightConfig::default(),
            components: 2,
            k: 2,
            folds: 5,
            seed: 0,
        }
    }
}

/// Pooled cross-validation result: per-fold accuracies plus the out-of-fold
/// predictions (labels and vote scores aligned to `classes`).
#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Sample standard deviation over fold accuracies.
    pub std_accuracy: f64,
    pub classes: Vec<u32>,
    pub y_true: Vec<u32>,
    pub y_pred: Vec<u32>,
    /// One row per held-out sample, columns aligned to `classes`.
    pub scores: Vec<Vec<f64>>,
    /// Features (or components) fed to the classifier, per fold.
    pub selected_counts: Vec<usize>,
}

/// Assigns every row to a fold, shuffling within each class so fold sizes
/// per class differ by at most one.
pub fn stratified_folds(m: &LabeledFeatureMatrix, folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
    }
    let mut assignment = vec![0usize; m.n_rows()];
    for &label in &m.classes() {
        let mut rows = m.class_rows(label);
        if rows.len() < folds {
            return Err(Error::Config(format!(
                "class {} has {} samples, fewer than {} folds",
                label,
                rows.len(),
                folds
            )));
        }
        let mut rng = stream(seed, "cv.fold", u64::from(label));
        rows.shuffle(&mut rng);
        for (pos, &row) in rows.iter().enumerate() {
            assignment[row] = pos % folds;
        }
    }
    Ok(assignment)
}

/// How a raw query row is mapped into the fitted model's feature space.
enum Mapper {
    /// Keep these raw columns (weighting methods; the model standardizes).
    Columns(Vec<usize>),
    /// Standardize with fold parameters, then project onto components.
    Projected(Standardization, LinearProjection),
    /// Pass the full row through unchanged.
    Identity,
}

/// A selection stage and classifier fitted on one training split.
pub(crate) struct FittedFold {
    pub(crate) model: WknnModel,
    mapper: Mapper,
    pub(crate) selected_count: usize,
}

impl FittedFold {
    pub(crate) fn map_query(&self, row: &[f64]) -> Vec<f64> {
        match &self.mapper {
            Mapper::Columns(cols) => cols.iter().map(|&j| row[j]).collect(),
            Mapper::Projected(params, proj) => proj.project_row(&params.apply_row(row)),
            Mapper::Identity => row.to_vec(),
        }
    }
}

/// Fits standardization, the configured selection method, and the classifier
/// on a training matrix. Reads nothing but `train`.
pub(crate) fn fit_selection(train: &LabeledFeatureMatrix, cfg: &CvConfig) -> Result<FittedFold> {
    match cfg.method {
        SelectionMethod::Pide | SelectionMethod::Cide => {
            let (z, _) = standardize(train);
            let fw = if cfg.method == SelectionMethod::Pide {
                pide_weights(&z, &cfg.weight)?
            } else {
                cide_weights(&z, cfg.weight.threshold)?
            };
            if fw.selected.is_empty() {
                return Err(Error::Degenerate(format!(
                    "no feature reaches the selection threshold {}",
                    fw.threshold
                )));
            }
            let restricted = train.select_columns(&fw.selected)?;
            let weights: Vec<f64> = fw.selected.iter().map(|&j| fw.w[j]).collect();
            let model = wknn_fit(&restricted, &weights, cfg.k)?;
            Ok(FittedFold {
                model,
                mapper: Mapper::Columns(fw.selected.clone()),
                selected_count: fw.selected.len(),
            })
        }
        SelectionMethod::Pca | SelectionMethod::Lda => {
            let (z, params) = standardize(train);
            let proj = if cfg.method == SelectionMethod::Pca {
                pca_fit(&z, cfg.components)?
            } else {
                lda_fit(&z, cfg.components)?
            };
            let projected: Vec<Vec<f64>> = (0..z.n_rows())
                .map(|i| proj.project_row(z.row(i)))
                .collect();
            let prefix = if cfg.method == SelectionMethod::Pca { "pc" } else { "ld" };
            let names: Vec<String> =
                (1..=proj.n_components()).map(|i| format!("{prefix}{i}")).collect();
            let comp =
                LabeledFeatureMatrix::new(projected, train.labels().to_vec(), names)?;
            let model = wknn_fit(&comp, &vec![1.0; comp.n_cols()], cfg.k)?;
            Ok(FittedFold {
                model,
                selected_count: proj.n_components(),
                mapper: Mapper::Projected(params, proj),
            })
        }
        SelectionMethod::None => {
            let model = wknn_fit(train, &vec![1.0; train.n_cols()], cfg.k)?;
            Ok(FittedFold {
                model,
                mapper: Mapper::Identity,
                selected_count: train.n_cols(),
            })
        }
    }
}

/// Stratified k-fold cross-validation with the selection stage re-fitted on
/// each training split.
pub fn cross_validate(m: &LabeledFeatureMatrix, cfg: &CvConfig) -> Result<CvOutcome> {
    let assignment = stratified_folds(m, cfg.folds, cfg.seed)?;
    let classes = m.classes();
    let mut fold_accuracies = Vec::with_capacity(cfg.folds);
    let mut selected_counts = Vec::with_capacity(cfg.folds);
    let mut y_true = Vec::new();
    let mut y_pred = Vec::new();
    let mut scores: Vec<Vec<f64>> = Vec::new();
    for fold in 0..cfg.folds {
        let train_idx: Vec<usize> =
            (0..m.n_rows()).filter(|&i| assignment[i] != fold).collect();
        let test_idx: Vec<usize> =
            (0..m.n_rows()).filter(|&i| assignment[i] == fold).collect();
        let train = m.select_rows(&train_idx)?;
        let fitted = fit_selection(&train, cfg)?;
        selected_counts.push(fitted.selected_count);
        let mut correct = 0usize;
        for &t in &test_idx {
            let q = fitted.map_query(m.row(t));
            let pred = wknn_predict(&fitted.model, &q)?;
            if pred.label == m.labels()[t] {
                correct += 1;
            }
            // Scores re-aligned to the global class list; classes absent
            // from a training split contribute zero mass.
            let mut row = vec![0.0; classes.len()];
            for (ci, &c) in pred.classes.iter().enumerate() {
                let slot = classes.binary_search(&c).expect("known class");
                row[slot] = pred.scores[ci];
            }
            y_true.push(m.labels()[t]);
            y_pred.push(pred.label);
            scores.push(row);
        }
        fold_accuracies.push(correct as f64 / test_idx.len() as f64);
    }
    let nf = fold_accuracies.len() as f64;
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / nf;
    let std_accuracy = (fold_accuracies
        .iter()
        .map(|a| (a - mean_accuracy).powi(2))
        .sum::<f64>()
        / (nf - 1.0))
        .sqrt();
    Ok(CvOutcome {
        fold_accuracies,
        mean_accuracy,
        std_accuracy,
        classes,
        y_true,
        y_pred,
        scores,
        selected_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn clustered(seed: u64, per_class: usize, dims: usize, spread: f64) -> LabeledFeatureMatrix {
        let mut rng = stream(seed, "classify.test", 0);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 1..=3u32 {
            for _ in 0..per_class {
                let center = f64::from(class) * 4.0;
                rows.push(
                    (0..dims)
                        .map(|d| {
                            // Class-dependent phase keeps the three class
                            // centers affinely independent.
                            let phase = ((class as usize + d) % 3) as f64 + 1.0;
                            center * phase * 0.5
                                + spread * rng.sample::<f64, _>(StandardNormal)
                        })
                        .collect(),
                );
                labels.push(class);
            }
        }
        LabeledFeatureMatrix::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn k1_reproduces_training_labels() {
        let m = clustered(1, 8, 4, 0.3);
        let model = wknn_fit(&m, &[1.0; 4], 1).unwrap();
        for i in 0..m.n_rows() {
            let p = wknn_predict(&model, m.row(i)).unwrap();
            assert_eq!(p.label, m.labels()[i]);
            assert_abs_diff_eq!(p.scores.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fit_rejects_bad_arguments() {
        let m = clustered(2, 3, 2, 0.1);
        assert!(wknn_fit(&m, &[1.0; 2], m.n_rows() + 1).is_err());
        assert!(wknn_fit(&m, &[1.0; 2], 0).is_err());
        assert!(wknn_fit(&m, &[0.0, 0.0], 2).is_err());
        assert!(wknn_fit(&m, &[1.0, -0.5], 2).is_err());
        assert!(wknn_fit(&m, &[1.0; 3], 2).is_err());
        let model = wknn_fit(&m, &[1.0; 2], 2).unwrap();
        assert!(wknn_predict(&model, &[1.0]).is_err());
        assert!(wknn_predict(&model, &[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn inverse_distance_vote_hand_case() {
        // One dimension: standardization rescales all distances by a common
        // factor, which cancels in the normalized votes, so the raw gaps
        // 0.1 and 0.3 yield score (1/0.1)/(1/0.1 + 1/0.3) = 0.75.
        let m = LabeledFeatureMatrix::from_rows(
            vec![vec![0.0], vec![0.4], vec![10.0]],
            vec![1, 2, 1],
        )
        .unwrap();
        let model = wknn_fit(&m, &[1.0], 2).unwrap();
        let p = wknn_predict(&model, &[0.1]).unwrap();
        assert_eq!(p.label, 1);
        assert_abs_diff_eq!(p.scores[0], 0.75, epsilon = 1e-6);
        assert_abs_diff_eq!(p.scores[1], 0.25, epsilon = 1e-6);
    }

    #[test]
    fn zero_weight_feature_is_ignored_and_ties_pick_smaller_class() {
        // The two training rows differ only in the second feature, which
        // carries zero weight, so the query is exactly equidistant.
        let m = LabeledFeatureMatrix::from_rows(
            vec![vec![5.0, 0.0], vec![5.0, 9.0]],
            vec![2, 1],
        )
        .unwrap();
        let model = wknn_fit(&m, &[1.0, 0.0], 2).unwrap();
        let p = wknn_predict(&model, &[5.0, 4.0]).unwrap();
        assert_abs_diff_eq!(p.scores[0], 0.5, epsilon = 1e-12);
        assert_eq!(p.label, 1, "tie must resolve to the smaller class id");
    }

    #[test]
    fn uniform_weights_match_plain_knn_oracle() {
        let m = clustered(3, 12, 4, 2.5);
        let k = 3;
        let model = wknn_fit(&m, &[1.0; 4], k).unwrap();
        // Independent oracle: standardize from scratch, rank by plain
        // Euclidean distance, vote 1/(h + delta), smallest class id on ties.
        let n = m.n_rows();
        let mut mean = [0.0; 4];
        let mut sd = [0.0; 4];
        for j in 0..4 {
            let col = m.column(j);
            mean[j] = col.iter().sum::<f64>() / n as f64;
            sd[j] = (col.iter().map(|x| (x - mean[j]).powi(2)).sum::<f64>()
                / (n as f64 - 1.0))
                .sqrt();
        }
        let zrow = |row: &[f64]| -> Vec<f64> {
            (0..4).map(|j| (row[j] - mean[j]) / sd[j]).collect()
        };
        let mut rng = stream(4, "classify.test", 1);
        for _ in 0..40 {
            let q: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..13.0)).collect();
            let zq = zrow(&q);
            let mut d: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let zi = zrow(m.row(i));
                    let h = zq
                        .iter()
                        .zip(&zi)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    (h, i)
                })
                .collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut vote = std::collections::BTreeMap::new();
            for &(h, i) in d.iter().take(k) {
                *vote.entry(m.labels()[i]).or_insert(0.0) += 1.0 / (h + 1e-12);
            }
            let want = vote
                .iter()
                .fold((0u32, f64::MIN), |acc, (&c, &v)| if v > acc.1 { (c, v) } else { acc })
                .0;
            let got = wknn_predict(&model, &q).unwrap();
            assert_eq!(got.label, want);
        }
    }

    #[test]
    fn weight_scaling_leaves_predictions_unchanged() {
        let m = clustered(5, 10, 5, 1.5);
        let w: Vec<f64> = (0..5).map(|j| 0.2 + j as f64 * 0.3).collect();
        let scaled: Vec<f64> = w.iter().map(|x| x * 37.0).collect();
        let a = wknn_fit(&m, &w, 2).unwrap();
        let b = wknn_fit(&m, &scaled, 2).unwrap();
        let mut rng = stream(6, "classify.test", 2);
        for _ in 0..50 {
            let q: Vec<f64> = (0..5).map(|_| rng.random_range(0.0..8.0)).collect();
            assert_eq!(
                wknn_predict(&a, &q).unwrap().label,
                wknn_predict(&b, &q).unwrap().label
            );
        }
    }

    #[test]
    fn duplicate_training_point_keeps_k1_labels() {
        let m = clustered(7, 6, 3, 0.8);
        let model = wknn_fit(&m, &[1.0; 3], 1).unwrap();
        let mut rows: Vec<Vec<f64>> = (0..m.n_rows()).map(|i| m.row(i).to_vec()).collect();
        let mut labels = m.labels().to_vec();
        rows.push(rows[4].clone());
        labels.push(labels[4]);
        let m2 = LabeledFeatureMatrix::from_rows(rows, labels).unwrap();
        // Same standardization inputs shift slightly with the extra row, so
        // compare on the duplicated point and far-away queries where the
        // nearest neighbor is unambiguous.
        let model2 = wknn_fit(&m2, &[1.0; 3], 1).unwrap();
        for i in 0..m.n_rows() {
            let p1 = wknn_predict(&model, m.row(i)).unwrap();
            let p2 = wknn_predict(&model2, m.row(i)).unwrap();
            assert_eq!(p1.label, p2.label);
        }
    }

    #[test]
    fn model_text_round_trips() {
        let m = clustered(8, 5, 3, 1.0);
        let w = vec![1.0, 0.25, std::f64::consts::FRAC_1_SQRT_2];
        let model = wknn_fit(&m, &w, 2).unwrap();
        let text = model.to_text();
        let back = WknnModel::from_text(&text).unwrap();
        assert_eq!(model, back);
        let mut rng = stream(9, "classify.test", 3);
        for _ in 0..20 {
            let q: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..10.0)).collect();
            assert_eq!(wknn_predict(&model, &q).unwrap(), wknn_predict(&back, &q).unwrap());
        }
        assert!(WknnModel::from_text("format,bogus\n").is_err());
        assert!(WknnModel::from_text(&text[..text.len() / 2]).is_err());
    }

    #[test]
    fn stratified_folds_balance_classes() {
        let m = clustered(10, 13, 2, 1.0);
        let folds = 5;
        let assignment = stratified_folds(&m, folds, 42).unwrap();
        for &label in &m.classes() {
            let mut counts = vec![0usize; folds];
            for &r in &m.class_rows(label) {
                counts[assignment[r]] += 1;
            }
            let lo = counts.iter().min().unwrap();
            let hi = counts.iter().max().unwrap();
            assert!(hi - lo <= 1, "class {label} fold sizes {counts:?}");
            assert_eq!(counts.iter().sum::<usize>(), 13);
        }
        assert_eq!(stratified_folds(&m, 42, 1).unwrap_err().exit_code(), 1);
        assert!(stratified_folds(&m, 1, 1).is_err());
    }

    #[test]
    fn cross_validation_is_deterministic_and_separates_clusters() {
        let m = clustered(11, 10, 6, 0.2);
        let cfg = CvConfig { seed: 7, ..CvConfig::default() };
        let a = cross_validate(&m, &cfg).unwrap();
        let b = cross_validate(&m, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fold_accuracies, vec![1.0; 5]);
        assert_eq!(a.mean_accuracy, 1.0);
        assert_eq!(a.y_true.len(), m.n_rows());
        for row in &a.scores {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cross_validation_supports_every_method() {
        let m = clustered(12, 10, 6, 0.2);
        for method in [
            SelectionMethod::Pide,
            SelectionMethod::Cide,
            SelectionMethod::Pca,
            SelectionMethod::Lda,
            SelectionMethod::None,
        ] {
            let cfg = CvConfig { method, components: 2, seed: 3, ..CvConfig::default() };
            let out = cross_validate(&m, &cfg).unwrap();
            assert!(
                out.mean_accuracy > 0.9,
                "{method} accuracy {}",
                out.mean_accuracy
            );
            let expect = match method {
                SelectionMethod::Pca | SelectionMethod::Lda => vec![2; 5],
                SelectionMethod::None => vec![6; 5],
                _ => out.selected_counts.clone(),
            };
            assert_eq!(out.selected_counts, expect);
        }
    }

    #[test]
    fn selection_never_reads_held_out_rows() {
        // Poison each held-out fold with NaN sentinels, fit the selection
        // stage on the remaining rows, and require every fitted quantity to
        // stay finite. Standardization deliberately propagates NaN, so any
        // leak would surface immediately.
        let clean = clustered(13, 10, 5, 0.4);
        let folds = 5;
        let assignment = stratified_folds(&clean, folds, 99).unwrap();
        for method in [
            SelectionMethod::Pide,
            SelectionMethod::Cide,
            SelectionMethod::Pca,
            SelectionMethod::Lda,
        ] {
            let cfg = CvConfig {
                method,
                weight: WeightConfig { threshold: 0.0, ..Default::default() },
                components: 2,
                ..CvConfig::default()
            };
            for fold in 0..folds {
                let rows: Vec<Vec<f64>> = (0..clean.n_rows())
                    .map(|i| {
                        if assignment[i] == fold {
                            vec![f64::NAN; clean.n_cols()]
                        } else {
                            clean.row(i).to_vec()
                        }
                    })
                    .collect();
                let poisoned = LabeledFeatureMatrix::new_unchecked(
                    rows,
                    clean.labels().to_vec(),
                    clean.names().to_vec(),
                )
                .unwrap();
                let train_idx: Vec<usize> = (0..clean.n_rows())
                    .filter(|&i| assignment[i] != fold)
                    .collect();
                let train = poisoned.select_rows(&train_idx).unwrap();
                let fitted = fit_selection(&train, &cfg).unwrap();
                assert!(
                    fitted.model.feature_weights().iter().all(|w| w.is_finite()),
                    "{method}: weights poisoned"
                );
                assert!(
                    fitted
                        .model
                        .train_rows()
                        .iter()
                        .all(|r| r.iter().all(|v| v.is_finite())),
                    "{method}: training rows poisoned"
                );
            }
        }
        // Negative control: fitting on data that does include the sentinel
        // rows must not come back clean, proving the test can detect a leak.
        let rows: Vec<Vec<f64>> = (0..clean.n_rows())
            .map(|i| {
                if assignment[i] == 0 {
                    vec![f64::NAN; clean.n_cols()]
                } else {
                    clean.row(i).to_vec()
                }
            })
            .collect();
        let poisoned = LabeledFeatureMatrix::new_unchecked(
            rows,
            clean.labels().to_vec(),
            clean.names().to_vec(),
        )
        .unwrap();
        let cfg = CvConfig {
            weight: WeightConfig { threshold: 0.0, ..Default::default() },
            ..CvConfig::default()
        };
        match fit_selection(&poisoned, &cfg) {
            Err(_) => {}
            Ok(f) => assert!(
                f.model.feature_weights().iter().any(|w| !w.is_finite()),
                "sentinels were laundered; leakage test has no teeth"
            ),
        }
    }
}
