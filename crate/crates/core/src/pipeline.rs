//! Configured end-to-end runs: data to windows to features to selection to
//! cross-validated classification, with a deterministic text report.

use crate::classify::{cross_validate, CvConfig};
use crate::error::{Error, Result};
use crate::eval::metrics::{confusion, roc_auc_ovr, AucReport, ConfusionMatrix};
use crate::features::{fuse, fused_feature_names};
use crate::ingest::{load_signal, segment, synth_dataset, SignalWindow, SynthSpec};
use crate::matrix::LabeledFeatureMatrix;
use crate::selection::lda::lda_fit;
use crate::selection::pca::pca_fit;
use crate::selection::standardize::standardize;
use crate::selection::weights::{cide_weights, pide_weights, WeightConfig};
use crate::selection::{NormalizerMode, SelectionMethod};
use crate::transforms::dwt::max_levels;
use crate::transforms::WaveletParams;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

/// Where the vibration records come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    /// Synthesize records from class specifications.
    Synth(SynthSpec),
    /// Load delimited signal files, one entry per class record.
    Files(FilesSpec),
}

/// Signal files with their class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilesSpec {
    pub entries: Vec<FileEntry>,
    pub sample_rate: f64,
    /// Zero-based column to read from each file.
    #[serde(default)]
    pub channel: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub path: PathBuf,
    pub label: u32,
}

/// Windowing of file-based records. Synthetic sources derive their window
/// length from `SynthSpec` and ignore this section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub len: usize,
    /// Step between window starts; defaults to `len` (no overlap).
    pub hop: Option<usize>,
}

impl WindowConfig {
    pub fn hop(&self) -> usize {
        self.hop.unwrap_or(self.len)
    }
}

fn default_family() -> String {
    "db10".into()
}

fn default_levels() -> usize {
    4
}

/// Wavelet family and decomposition depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletConfig {
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

impl Default for WaveletConfig {
    fn default() -> Self {
        Self { family: default_family(), levels: default_levels() }
    }
}

fn default_threshold() -> f64 {
    0.92
}

fn default_components() -> usize {
    2
}

fn default_smoothing() -> usize {
    5
}

fn default_normalizer() -> NormalizerMode {
    NormalizerMode::Std
}

fn default_method() -> SelectionMethod {
    SelectionMethod::Pide
}

/// Selection method and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionConfig {
    #[serde(default = "default_method")]
    pub method: SelectionMethod,
    /// Weight cutoff for the weighting methods.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Component count for the projection methods.
    #[serde(default = "default_components")]
    pub components: usize,
    #[serde(default = "default_smoothing")]
    pub smoothing_window: usize,
    #[serde(default = "default_normalizer")]
    pub normalizer: NormalizerMode,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            method: default_method(),
            threshold: default_threshold(),
            components: default_components(),
            smoothing_window: default_smoothing(),
            normalizer: default_normalizer(),
        }
    }
}

fn default_k() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierConfig {
    /// Neighbor count of the weighted KNN vote.
    #[serde(default = "default_k")]
    pub k: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self { k: default_k() }
    }
}

fn default_folds() -> usize {
    5
}

/// Everything one run needs; serializable so reports can echo it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_folds")]
    pub folds: usize,
    pub data: DataSource,
    #[serde(default)]
    pub window: Option<WindowConfig>,
    #[serde(default)]
    pub wavelet: WaveletConfig,
    #[serde(default)]
    pub selection: SelectionConfig,
    #[serde(default)]
    pub classifier: ClassifierConfig,
}

impl PipelineConfig {
    /// Parse the flat TOML schema (see the repository README).
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Serialize back to TOML (the reports' config echo).
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Window length actually used: the synth spec's derived length or the
    /// configured one for file sources.
    pub fn effective_window_len(&self) -> usize {
        match &self.data {
            DataSource::Synth(spec) => spec.window_len(),
            DataSource::Files(_) => self.window.as_ref().map_or(0, |w| w.len),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::Config(format!("need at least 2 folds, got {}", self.folds)));
        }
        if self.classifier.k == 0 {
            return Err(Error::Config("neighbor count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.selection.threshold) {
            return Err(Error::Config(format!(
                "selection threshold must lie in [0, 1], got {}",
                self.selection.threshold
            )));
        }
        if self.selection.components == 0 {
            return Err(Error::Config("component count must be at least 1".into()));
        }
        if self.selection.smoothing_window.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "smoothing window must be odd, got {}",
                self.selection.smoothing_window
            )));
        }
        match &self.data {
            DataSource::Synth(spec) => spec.validate()?,
            DataSource::Files(files) => {
                if files.entries.is_empty() {
                    return Err(Error::Config("no data files listed".into()));
                }
                if !(files.sample_rate.is_finite() && files.sample_rate > 0.0) {
                    return Err(Error::Config("sample_rate must be positive".into()));
                }
                let w = self.window.as_ref().ok_or_else(|| {
                    Error::Config("file sources need a [window] section".into())
                })?;
                if w.len < 2 {
                    return Err(Error::Config("window length must be at least 2".into()));
                }
                if w.hop() == 0 {
                    return Err(Error::Config("window hop must be at least 1".into()));
                }
            }
        }
        let params = WaveletParams::new(&self.wavelet.family, self.wavelet.levels)?;
        let len = self.effective_window_len();
        let capacity = max_levels(len, params.filter_len());
        if self.wavelet.levels > capacity {
            return Err(Error::Config(format!(
                "window length {} supports at most {} {} levels, config asks for {}",
                len, capacity, self.wavelet.family, self.wavelet.levels
            )));
        }
        Ok(())
    }

    /// The cross-validation settings this config implies.
    pub fn cv_config(&self) -> CvConfig {
        CvConfig {
            method: self.selection.method,
            weight: WeightConfig {
                threshold: self.selection.threshold,
                smoothing_window: self.selection.smoothing_window,
                normalizer: self.selection.normalizer,
            },
            components: self.selection.components,
            k: self.classifier.k,
            folds: self.folds,
            seed: self.seed,
        }
    }
}

/// Runs ingest and feature extraction: every window becomes one labeled row
/// of 16 statistics per domain (time, spectrum, wavelet subbands).
pub fn extract_features(cfg: &PipelineConfig) -> Result<LabeledFeatureMatrix> {
    cfg.validate()?;
    let params = WaveletParams::new(&cfg.wavelet.family, cfg.wavelet.levels)?;
    let (windows, sample_rate): (Vec<SignalWindow>, f64) = match &cfg.data {
        DataSource::Synth(spec) => {
            let w = synth_dataset(spec, cfg.seed).map_err(|e| e.in_stage("ingest"))?;
            (w, spec.sample_rate)
        }
        DataSource::Files(files) => {
            let w = cfg.window.as_ref().expect("validated");
            let mut all = Vec::new();
            for entry in &files.entries {
                let signal = load_signal(&entry.path, files.channel, files.sample_rate)
                    .map_err(|e| e.in_stage("ingest"))?;
                for mut win in segment(&signal, w.len, w.hop())
                    .map_err(|e| e.in_stage("ingest"))?
                {
                    win.label = Some(entry.label);
                    all.push(win);
                }
            }
            (all, files.sample_rate)
        }
    };
    if windows.is_empty() {
        return Err(Error::Invalid("no windows produced".into()).in_stage("ingest"));
    }
    let mut rows = Vec::with_capacity(windows.len());
    let mut labels = Vec::with_capacity(windows.len());
    for win in &windows {
        let fused = fuse(&win.samples, sample_rate, &params)
            .map_err(|e| e.in_stage("features"))?;
        rows.push(fused.values);
        labels.push(win.label.expect("labeled window"));
    }
    let names = fused_feature_names(cfg.wavelet.levels);
    LabeledFeatureMatrix::new(rows, labels, names).map_err(|e| e.in_stage("features"))
}

/// Full-data selection diagnostics: the weight table (weighting methods) or
/// explained-score table (projection methods), plus the selected feature or
/// component names.
pub fn selection_summary(
    m: &LabeledFeatureMatrix,
    cfg: &PipelineConfig,
) -> Result<(String, Vec<String>)> {
    let cv = cfg.cv_config();
    match cfg.selection.method {
        SelectionMethod::Pide | SelectionMethod::Cide => {
            let (z, _) = standardize(m);
            let fw = if cfg.selection.method == SelectionMethod::Pide {
                pide_weights(&z, &cv.weight)?
            } else {
                cide_weights(&z, cv.weight.threshold)?
            };
            let names = fw
                .selected
                .iter()
                .map(|&j| m.names()[j].clone())
                .collect();
            Ok((fw.to_table(m.names()), names))
        }
        SelectionMethod::Pca | SelectionMethod::Lda => {
            let (z, _) = standardize(m);
            let (proj, prefix) = if cfg.selection.method == SelectionMethod::Pca {
                (pca_fit(&z, cv.components)?, "pc")
            } else {
                (lda_fit(&z, cv.components)?, "ld")
            };
            let names: Vec<String> =
                (1..=proj.n_components()).map(|i| format!("{prefix}{i}")).collect();
            let mut table = String::from("component,explained\n");
            for (name, e) in names.iter().zip(&proj.explained) {
                let _ = writeln!(table, "{name},{e}");
            }
            Ok((table, names))
        }
        SelectionMethod::None => {
            let mut table = String::from("feature,weight\n");
            for name in m.names() {
                let _ = writeln!(table, "{name},1");
            }
            Ok((table, m.names().to_vec()))
        }
    }
}

/// Fit the configured selection method and classifier on the full data.
///
/// The returned model's feature names are the selected raw features
/// (weighting methods) or the component names (projection methods), so the
/// saved model is self-describing.
pub fn train(cfg: &PipelineConfig) -> Result<crate::classify::WknnModel> {
    cfg.validate()?;
    let matrix = extract_features(cfg)?;
    let fitted = crate::classify::fit_selection(&matrix, &cfg.cv_config())
        .map_err(|e| e.in_stage("train"))?;
    Ok(fitted.model)
}

/// Everything one run produced. [`to_text`](Self::to_text) is byte-stable
/// across reruns; the wall clock is reported separately.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config_echo: String,
    pub seed: u64,
    pub method: SelectionMethod,
    /// Weight table (weighting methods) or explained-score table
    /// (projection methods), delimited.
    pub weight_table: String,
    /// Selected feature names (full data), or component names.
    pub selected_names: Vec<String>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    /// Per-fold selected-feature counts.
    pub selected_counts: Vec<usize>,
    /// Count on the full data (the comparable headline figure).
    pub full_selected_count: usize,
    pub confusion: ConfusionMatrix,
    pub auc: AucReport,
    pub wall_clock: Duration,
}

impl RunReport {
    /// Deterministic rendering: identical config and seed give identical
    /// bytes (the wall clock is deliberately excluded).
    pub fn to_text(&self) -> String {
        let mut out = String::from("# run\n");
        let _ = writeln!(out, "seed,{}", self.seed);
        let _ = writeln!(out, "method,{}", self.method);
        let _ = writeln!(out, "selected_full,{}", self.full_selected_count);
        let _ = writeln!(out, "mean_accuracy,{}", self.mean_accuracy);
        let _ = writeln!(out, "std_accuracy,{}", self.std_accuracy);
        out.push_str("\n# folds\nfold,accuracy,selected\n");
        for (i, (a, s)) in self
            .fold_accuracies
            .iter()
            .zip(&self.selected_counts)
            .enumerate()
        {
            let _ = writeln!(out, "{i},{a},{s}");
        }
        out.push_str("\n# confusion\n");
        out.push_str(&self.confusion.to_table());
        out.push_str("\n# auc\n");
        out.push_str(&self.auc.to_table());
        out.push_str("\n# selected\n");
        for name in &self.selected_names {
            out.push_str(name);
            out.push('\n');
        }
        out.push_str("\n# weights\n");
        out.push_str(&self.weight_table);
        out.push_str("\n# config\n");
        out.push_str(&self.config_echo);
        out
    }
}

/// Executes the configured pipeline end to end.
pub fn run(cfg: &PipelineConfig) -> Result<RunReport> {
    let started = Instant::now();
    cfg.validate()?;
    let matrix = extract_features(cfg)?;
    let (weight_table, selected_names) =
        selection_summary(&matrix, cfg).map_err(|e| e.in_stage("selection"))?;
    let cv_cfg = cfg.cv_config();
    let outcome = cross_validate(&matrix, &cv_cfg).map_err(|e| e.in_stage("classify"))?;
    let cm =
        confusion(&outcome.y_true, &outcome.y_pred).map_err(|e| e.in_stage("evaluate"))?;
    let auc = roc_auc_ovr(&outcome.scores, &outcome.classes, &outcome.y_true)
        .map_err(|e| e.in_stage("evaluate"))?;
    Ok(RunReport {
        config_echo: cfg.to_toml(),
        seed: cfg.seed,
        method: cfg.selection.method,
        weight_table,
        full_selected_count: selected_names.len(),
        selected_names,
        fold_accuracies: outcome.fold_accuracies,
        mean_accuracy: outcome.mean_accuracy,
        std_accuracy: outcome.std_accuracy,
        selected_counts: outcome.selected_counts,
        confusion: cm,
        auc,
        wall_clock: started.elapsed(),
    })
}

/// One method's row in the comparison report.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRow {
    pub method: SelectionMethod,
    /// Full-data selected-feature (or component) count.
    pub selected: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub hyperparameters: String,
}

/// Delimited rendering of the comparison rows.
pub fn comparison_table(rows: &[MethodRow]) -> String {
    let mut out = String::from("method,selected,mean_accuracy,std_accuracy,hyperparameters\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.method, r.selected, r.mean_accuracy, r.std_accuracy, r.hyperparameters
        );
    }
    out
}

/// Cross-validates several selection methods on one extracted feature
/// matrix (features are extracted once; extraction does not depend on the
/// method).
pub fn compare_methods(cfg: &PipelineConfig, methods: &[SelectionMethod]) -> Result<Vec<MethodRow>> {
    if methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    cfg.validate()?;
    let matrix = extract_features(cfg)?;
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut method_cfg = cfg.clone();
        method_cfg.selection.method = method;
        let (_, selected_names) = selection_summary(&matrix, &method_cfg)
            .map_err(|e| e.in_stage("selection"))?;
        let outcome = cross_validate(&matrix, &method_cfg.cv_config())
            .map_err(|e| e.in_stage("classify"))?;
        let hyperparameters = match method {
            SelectionMethod::Pide | SelectionMethod::Cide => format!(
                "threshold={};k={}",
                cfg.selection.threshold, cfg.classifier.k
            ),
            SelectionMethod::Pca | SelectionMethod::Lda => {
                format!("components={};k={}", cfg.selection.components, cfg.classifier.k)
            }
            SelectionMethod::None => format!("k={}", cfg.classifier.k),
        };
        rows.push(MethodRow {
            method,
            selected: selected_names.len(),
            mean_accuracy: outcome.mean_accuracy,
            std_accuracy: outcome.std_accuracy,
            hyperparameters,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ClassSpec, FaultKind, SpeedProfile};

    fn synth_config(seed: u64) -> PipelineConfig {
        let spec = SynthSpec {
            classes: vec![
                ClassSpec {
                    label: 1,
                    kind: FaultKind::Healthy,
                    impulse_rate: 50.0,
                    resonance: 1000.0,
                    decay: 500.0,
                    snr_db: 10.0,
                    speed_profile: SpeedProfile::Constant,
                },
                ClassSpec {
                    label: 2,
                    kind: FaultKind::InnerRace,
                    impulse_rate: 90.0,
                    resonance: 1500.0,
                    decay: 500.0,
                    snr_db: 8.0,
                    speed_profile: SpeedProfile::Constant,
                },
                ClassSpec {
                    label: 3,
                    kind: FaultKind::OuterRace,
                    impulse_rate: 55.0,
                    resonance: 900.0,
                    decay: 350.0,
                    snr_db: 8.0,
                    speed_profile: SpeedProfile::Constant,
                },
            ],
            duration_s: 1.28,
            sample_rate: 4000.0,
            windows_per_class: 10,
        };
        PipelineConfig {
            seed,
            folds: 5,
            data: DataSource::Synth(spec),
            window: None,
            wavelet: WaveletConfig { family: "db4".into(), levels: 4 },
            selection: SelectionConfig::default(),
            classifier: ClassifierConfig::default(),
        }
    }

    #[test]
    fn toml_round_trip_preserves_config() {
        let cfg = synth_config(7);
        let text = cfg.to_toml();
        let back = PipelineConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn toml_defaults_fill_optional_sections() {
        let text = r#"
[data.synth]
duration_s = 1.28
sample_rate = 4000.0
windows_per_class = 10

[[data.synth.classes]]
label = 1
kind = "healthy"
impulse_rate = 50.0
resonance = 1000.0
decay = 500.0
snr_db = 10.0

[[data.synth.classes]]
label = 2
kind = "inner_race"
impulse_rate = 90.0
resonance = 1500.0
decay = 500.0
snr_db = 8.0
"#;
        let cfg = PipelineConfig::from_toml(text).unwrap();
        assert_eq!(cfg.folds, 5);
        assert_eq!(cfg.classifier.k, 2);
        assert_eq!(cfg.selection.threshold, 0.92);
        assert_eq!(cfg.selection.method, SelectionMethod::Pide);
        assert_eq!(cfg.wavelet.family, "db10");
        assert_eq!(cfg.seed, 0);
        assert!(PipelineConfig::from_toml("window = 3").is_err());
    }

    #[test]
    fn validation_catches_inconsistent_settings() {
        let mut cfg = synth_config(1);
        cfg.folds = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = synth_config(1);
        cfg.selection.threshold = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = synth_config(1);
        cfg.selection.smoothing_window = 4;
        assert!(cfg.validate().is_err());
        // 512-sample windows cannot carry 7 db10 levels.
        let mut cfg = synth_config(1);
        cfg.wavelet.levels = 7;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("levels"), "{err}");
        let mut cfg = synth_config(1);
        cfg.data = DataSource::Files(FilesSpec {
            entries: vec![FileEntry { path: "x.csv".into(), label: 1 }],
            sample_rate: 100.0,
            channel: 0,
        });
        assert!(cfg.validate().is_err(), "file source without window section");
    }

    #[test]
    fn extraction_names_and_shape_match_the_feature_layout() {
        let cfg = synth_config(3);
        let m = extract_features(&cfg).unwrap();
        assert_eq!(m.n_rows(), 30);
        assert_eq!(m.n_cols(), 112);
        assert_eq!(m.names()[0], "time.F1");
        assert_eq!(m.names()[111], "dwt.D1.F16");
        assert_eq!(m.classes(), vec![1, 2, 3]);
    }

    #[test]
    fn run_produces_structured_deterministic_report() {
        let cfg = synth_config(11);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.fold_accuracies.len(), 5);
        assert_eq!(a.confusion.classes, vec![1, 2, 3]);
        assert!(a.weight_table.lines().count() > 100);
        assert!(!a.selected_names.is_empty());
        let text = a.to_text();
        for section in ["# run", "# folds", "# confusion", "# auc", "# selected", "# weights", "# config"] {
            assert!(text.contains(section), "missing {section}");
        }
        assert!(!text.contains("wall"), "report text must stay time-free");
    }

    #[test]
    fn full_data_training_keeps_selected_names() {
        let cfg = synth_config(21);
        let model = train(&cfg).unwrap();
        let all = crate::features::fused_feature_names(4);
        assert!(!model.feature_names().is_empty());
        assert!(model.feature_names().iter().all(|n| all.contains(n)));
        assert_eq!(model.k(), 2);
        let mut projected = synth_config(21);
        projected.selection.method = SelectionMethod::Pca;
        projected.selection.components = 3;
        let model = train(&projected).unwrap();
        assert_eq!(model.feature_names(), ["pc1", "pc2", "pc3"]);
    }

    #[test]
    fn method_none_keeps_all_features() {
        let mut cfg = synth_config(5);
        cfg.selection.method = SelectionMethod::None;
        let report = run(&cfg).unwrap();
        assert_eq!(report.full_selected_count, 112);
        assert_eq!(report.selected_counts, vec![112; 5]);
    }

    #[test]
    fn comparison_covers_each_requested_method() {
        let mut cfg = synth_config(9);
        cfg.selection.components = 2;
        let methods = [
            SelectionMethod::Pide,
            SelectionMethod::Cide,
            SelectionMethod::Pca,
            SelectionMethod::Lda,
            SelectionMethod::None,
        ];
        let rows = compare_methods(&cfg, &methods).unwrap();
        assert_eq!(rows.len(), 5);
        for (row, method) in rows.iter().zip(methods) {
            assert_eq!(row.method, method);
            assert!(row.mean_accuracy >= 0.0 && row.mean_accuracy <= 1.0);
        }
        assert_eq!(rows[2].selected, 2);
        assert_eq!(rows[4].selected, 112);
        let table = comparison_table(&rows);
        assert_eq!(table.lines().count(), 6);
        assert!(rows[0].hyperparameters.contains("threshold=0.92"));
        assert!(compare_methods(&cfg, &[]).is_err());
    }
}
