//! Confusion matrix, accuracy, and one-vs-rest ROC AUC.

use crate::error::{Error, Result};
use crate::eval::rank_tests::midranks;
use std::fmt::Write as _;

/// Class-by-class prediction counts: rows are true classes, columns
/// predicted classes, both in ascending class-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub classes: Vec<u32>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Delimited rendering with a header of predicted class ids.
    pub fn to_table(&self) -> String {
        let mut out = String::from("true_class");
        for c in &self.classes {
            let _ = write!(out, ",pred_{c}");
        }
        out.push('\n');
        for (i, c) in self.classes.iter().enumerate() {
            let _ = write!(out, "{c}");
            for v in &self.counts[i] {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Tallies predictions against truth. The class set is the sorted distinct
/// true labels; a predicted label outside it is an error.
pub fn confusion(y_true: &[u32], y_pred: &[u32]) -> Result<ConfusionMatrix> {
    if y_true.is_empty() {
        return Err(Error::Invalid("no samples to score".into()));
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::Invalid(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut classes = y_true.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        let ti = classes.binary_search(&t).expect("true label in class set");
        let pi = classes.binary_search(&p).map_err(|_| {
            Error::Invalid(format!("predicted label {p} never appears among true labels"))
        })?;
        counts[ti][pi] += 1;
    }
    Ok(ConfusionMatrix { classes, counts })
}

/// Fraction of correct predictions: trace over total.
pub fn accuracy(cm: &ConfusionMatrix) -> f64 {
    let correct: u64 = (0..cm.classes.len()).map(|i| cm.counts[i][i]).sum();
    correct as f64 / cm.total() as f64
}

/// One-vs-rest AUC per class plus the macro average over defined classes.
#[derive(Debug, Clone, PartialEq)]
pub struct AucReport {
    pub classes: Vec<u32>,
    /// `None` where the class has no positives or no negatives.
    pub per_class: Vec<Option<f64>>,
    /// Unweighted mean over defined classes; `None` if every class is
    /// undefined.
    pub macro_avg: Option<f64>,
}

impl AucReport {
    /// Delimited rendering, one row per class plus the macro row.
    pub fn to_table(&self) -> String {
        let mut out = String::from("class,auc\n");
        for (c, a) in self.classes.iter().zip(&self.per_class) {
            match a {
                Some(v) => {
                    let _ = writeln!(out, "{c},{v}");
                }
                None => {
                    let _ = writeln!(out, "{c},undefined");
                }
            }
        }
        match self.macro_avg {
            Some(v) => {
                let _ = writeln!(out, "macro,{v}");
            }
            None => {
                let _ = writeln!(out, "macro,undefined");
            }
        }
        out
    }
}

/// Computes one-vs-rest AUC from per-class scores.
///
/// `scores` has one row per sample aligned with `y_true`, columns aligned
/// with `classes` and summing to 1. Each class's AUC is the Mann-Whitney
/// statistic of its score column (ties count one half).
pub fn roc_auc_ovr(
    scores: &[Vec<f64>],
    classes: &[u32],
    y_true: &[u32],
) -> Result<AucReport> {
    if scores.is_empty() {
        return Err(Error::Invalid("no samples to score".into()));
    }
    if scores.len() != y_true.len() {
        return Err(Error::Invalid(format!(
            "{} score rows vs {} labels",
            scores.len(),
            y_true.len()
        )));
    }
    for (i, row) in scores.iter().enumerate() {
        if row.len() != classes.len() {
            return Err(Error::Invalid(format!(
                "score row {i} has {} entries for {} classes",
                row.len(),
                classes.len()
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || row.iter().any(|&s| !(0.0..=1.0 + 1e-9).contains(&s)) {
            return Err(Error::Invalid(format!(
                "score row {i} is not a probability vector (sum {sum})"
            )));
        }
    }
    if let Some(&t) = y_true.iter().find(|t| !classes.contains(t)) {
        return Err(Error::Invalid(format!("label {t} not in the class list")));
    }
    let mut per_class = Vec::with_capacity(classes.len());
    for (ci, _) in classes.iter().enumerate() {
        let positives: Vec<bool> = y_true.iter().map(|&t| t == classes[ci]).collect();
        let p = positives.iter().filter(|&&x| x).count();
        let n = positives.len() - p;
        if p == 0 || n == 0 {
            per_class.push(None);
            continue;
        }
        let column: Vec<f64> = scores.iter().map(|row| row[ci]).collect();
        let ranks = midranks(&column);
        let r_pos: f64 = ranks
            .iter()
            .zip(&positives)
            .filter(|(_, &is_pos)| is_pos)
            .map(|(&r, _)| r)
            .sum();
        let auc = (r_pos - (p * (p + 1)) as f64 / 2.0) / (p as f64 * n as f64);
        per_class.push(Some(auc));
    }
    let defined: Vec<f64> = per_class.iter().flatten().copied().collect();
    let macro_avg = if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    };
    Ok(AucReport { classes: classes.to_vec(), per_class, macro_avg })
}
