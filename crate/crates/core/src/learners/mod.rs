//! The wrapped evaluation models and report metrics: linear SVM with k-fold
//! cross-validation, k-means with city-block distance and silhouette, and
//! the PCA baseline.

mod kmeans;
mod metrics;
mod pca;
mod svm;

pub use kmeans::{city_block, kmeans, silhouette, ClusterResult};
pub use metrics::{classification_report, cluster_evaluator_sweep, ClassMetrics, SweepResult};
pub use pca::{pca_reduce, PcaReduction};
pub use svm::{svm_cv_accuracy, CvAccuracy};

use crate::features::{FeatureError, FeatureMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// A feature matrix paired with per-row condition labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledData {
    matrix: FeatureMatrix,
    labels: Vec<String>,
}

impl LabeledData {
    /// Labels taken from the matrix row provenance.
    pub fn from_matrix(matrix: FeatureMatrix) -> Self {
        let labels = matrix.labels();
        Self { matrix, labels }
    }

    pub fn new(matrix: FeatureMatrix, labels: Vec<String>) -> Result<Self, LearnError> {
        if matrix.n_rows() != labels.len() {
            return Err(LearnError::Config(format!(
                "{} rows but {} labels",
                matrix.n_rows(),
                labels.len()
            )));
        }
        Ok(Self { matrix, labels })
    }

    pub fn matrix(&self) -> &FeatureMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> Vec<String> {
        let mut cs: Vec<String> = self.labels.clone();
        cs.sort();
        cs.dedup();
        cs
    }

    pub fn masked(&self, mask: &[bool]) -> Result<Self, LearnError> {
        Ok(Self {
            matrix: self.matrix.masked(mask)?,
            labels: self.labels.clone(),
        })
    }
}
