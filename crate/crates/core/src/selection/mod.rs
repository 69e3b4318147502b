//! Feature weighting and dimensionality reduction: PIDE weighting with its
//! CIDE, PCA and LDA baselines, plus the shared standardization step.

pub mod distance;
pub mod lda;
pub mod pca;
pub mod robustness;
pub mod standardize;
pub mod weights;

pub use distance::{intra_inter, IntraInter};
pub use lda::{lda_fit, lda_transform};
pub use pca::{pca_fit, pca_transform, LinearProjection};
pub use robustness::{per_feature_robustness, robustness, NormalizerMode};
pub use standardize::{standardize, Standardization};
pub use weights::{cide_weights, pide_weights, FeatureWeights, WeightConfig};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Selection stage choices of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMethod {
    /// Distance evaluation improved with the robustness factor.
    Pide,
    /// Conventional distance evaluation (inter/intra ratio only).
    Cide,
    Pca,
    Lda,
    /// No selection: all features, uniform weights.
    None,
}

impl std::fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SelectionMethod::Pide => "pide",
            SelectionMethod::Cide => "cide",
            SelectionMethod::Pca => "pca",
            SelectionMethod::Lda => "lda",
            SelectionMethod::None => "none",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SelectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pide" => Ok(SelectionMethod::Pide),
            "cide" => Ok(SelectionMethod::Cide),
            "pca" => Ok(SelectionMethod::Pca),
            "lda" => Ok(SelectionMethod::Lda),
            "none" => Ok(SelectionMethod::None),
            other => Err(Error::Config(format!(
                "unknown selection method {other:?} (pide, cide, pca, lda, none)"
            ))),
        }
    }
}
