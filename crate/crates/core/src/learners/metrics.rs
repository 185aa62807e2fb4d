//! Report metrics: per-class accuracy / global accuracy / weighted F1 from
//! pooled cross-validation predictions, and the silhouette sweep over k.

use super::svm::cv_predictions;
use super::{kmeans, LabeledData, LearnError};
use crate::features::FeatureMatrix;

/// Classification summary over pooled out-of-fold predictions.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ClassMetrics {
    pub classes: Vec<String>,
    /// `confusion[t][p]`: instances of true class `t` predicted as `p`.
    pub confusion: Vec<Vec<usize>>,
    /// Per-class recall, aligned with `classes`.
    pub per_class_accuracy: Vec<f64>,
    pub global_accuracy: f64,
    pub weighted_f1: f64,
    pub folds_used: usize,
    pub folds_reduced: bool,
}

impl ClassMetrics {
    /// Derive every metric from a confusion matrix.
    pub fn from_confusion(
        classes: Vec<String>,
        confusion: Vec<Vec<usize>>,
        folds_used: usize,
        folds_reduced: bool,
    ) -> Self {
        let k = classes.len();
        let total: usize = confusion.iter().flatten().sum();
        let mut per_class_accuracy = Vec::with_capacity(k);
        let mut weighted_f1 = 0.0;
        let mut trace = 0usize;
        for t in 0..k {
            let support: usize = confusion[t].iter().sum();
            let tp = confusion[t][t];
            trace += tp;
            let predicted: usize = (0..k).map(|r| confusion[r][t]).sum();
            let recall = if support > 0 {
                tp as f64 / support as f64
            } else {
                0.0
            };
            let precision = if predicted > 0 {
                tp as f64 / predicted as f64
            } else {
                0.0
            };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            per_class_accuracy.push(recall);
            weighted_f1 += f1 * support as f64 / total as f64;
        }
        Self {
            classes,
            confusion,
            per_class_accuracy,
            global_accuracy: trace as f64 / total as f64,
            weighted_f1,
            folds_used,
            folds_reduced,
        }
    }
}

/// Cross-validated classification report: out-of-fold predictions pooled
/// into a confusion matrix, per-class accuracy = class recall.
pub fn classification_report(
    data: &LabeledData,
    folds: usize,
    seed: u64,
) -> Result<ClassMetrics, LearnError> {
    let (predictions, folds_used, reduced) = cv_predictions(data, folds, seed)?;
    let classes = data.classes();
    let index = |label: &str| classes.iter().position(|c| c == label).expect("known class");
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    for (pred, truth) in predictions.iter().zip(data.labels()) {
        confusion[index(truth)][index(pred)] += 1;
    }
    Ok(ClassMetrics::from_confusion(
        classes, confusion, folds_used, reduced,
    ))
}

/// Silhouette sweep over cluster counts.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SweepResult {
    /// `(k, average silhouette)` per evaluated cluster count.
    pub entries: Vec<(usize, f64)>,
    /// The k with the highest silhouette (smallest k on ties).
    pub best_k: usize,
}

/// Run k-means + silhouette for every k in `[k_min, k_max]` and report the
/// silhouette-maximizing cluster count.
pub fn cluster_evaluator_sweep(
    m: &FeatureMatrix,
    k_min: usize,
    k_max: usize,
    seed: u64,
) -> Result<SweepResult, LearnError> {
    if k_min < 2 || k_min > k_max {
        return Err(LearnError::Config(format!(
            "invalid sweep range [{k_min}, {k_max}]"
        )));
    }
    if k_max > m.n_rows() {
        return Err(LearnError::Config(format!(
            "k_max = {k_max} exceeds the {} rows",
            m.n_rows()
        )));
    }
    let mut entries = Vec::with_capacity(k_max - k_min + 1);
    let mut best = (k_min, f64::NEG_INFINITY);
    for k in k_min..=k_max {
        let result = kmeans(m, k, seed)?;
        entries.push((k, result.avg_silhouette));
        if result.avg_silhouette > best.1 {
            best = (k, result.avg_silhouette);
        }
    }
    Ok(SweepResult {
        entries,
        best_k: best.0,
    })
}
