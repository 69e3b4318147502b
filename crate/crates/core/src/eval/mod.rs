//! Evaluation: classification metrics, seeded noise injection, nonparametric
//! rank tests, and the threshold-sweep and noise-robustness experiments.

pub mod experiments;
pub mod metrics;
pub mod noise;

pub use experiments::{
    default_ratio_grid, default_threshold_grid, robustness_experiment, robustness_table,
    sweep_table, threshold_sweep, RobustnessRow, SweepRow,
};
pub use metrics::{accuracy, confusion, roc_auc_ovr, AucReport, ConfusionMatrix};
pub use noise::{inject_noise, NoiseSpec, TouchedCells};
pub use rank_tests::{kruskal_wallis, wilcoxon_signed_rank, TestResult};
