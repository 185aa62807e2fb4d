//! PCA benchmark: project onto the leading principal components covering a
//! cumulative explained-variance threshold.

use super::LearnError;
use crate::features::{ColumnMeta, FeatureKind, FeatureMatrix};
use nalgebra::DMatrix;

/// Projection result. `scores` is the reduced matrix (one `pcN` column per
/// retained component); `components` are the orthonormal loadings, row per
/// component.
#[derive(Debug, Clone)]
pub struct PcaReduction {
    pub scores: FeatureMatrix,
    pub components: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub explained_variance: Vec<f64>,
    pub threshold: f64,
}

impl PcaReduction {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Back-projection of the scores into the original feature space.
    pub fn reconstruct_row(&self, r: usize) -> Vec<f64> {
        let score = self.scores.row(r);
        let mut out = self.mean.clone();
        for (comp, s) in self.components.iter().zip(score) {
            for (o, c) in out.iter_mut().zip(comp) {
                *o += s * c;
            }
        }
        out
    }
}

/// Mean-center the columns, eigendecompose the covariance and keep the
/// smallest leading component count whose cumulative explained variance
/// reaches `variance_threshold`.
pub fn pca_reduce(
    m: &FeatureMatrix,
    variance_threshold: f64,
) -> Result<PcaReduction, LearnError> {
    if m.n_rows() < 2 {
        return Err(LearnError::Config(format!(
            "PCA needs at least 2 rows, got {}",
            m.n_rows()
        )));
    }
    if !(0.0 < variance_threshold && variance_threshold <= 1.0) {
        return Err(LearnError::Config(format!(
            "variance threshold must lie in (0, 1], got {variance_threshold}"
        )));
    }
    let n = m.n_rows();
    let d = m.n_cols();
    let mean: Vec<f64> = (0..d)
        .map(|c| (0..n).map(|r| m.value(r, c)).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, d, |r, c| m.value(r, c) - mean[c]);
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let total: f64 = cov.diagonal().iter().sum();
    if !(total > 1e-300) {
        return Err(LearnError::Degenerate(
            "matrix has zero total variance".into(),
        ));
    }

    let eigen = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap()
    });

    let mut retained = 0usize;
    let mut cum = 0.0;
    for &idx in &order {
        retained += 1;
        cum += eigen.eigenvalues[idx].max(0.0);
        if cum >= variance_threshold * total - 1e-12 {
            break;
        }
    }

    let mut components = Vec::with_capacity(retained);
    let mut explained = Vec::with_capacity(retained);
    for &idx in order.iter().take(retained) {
        let col = eigen.eigenvectors.column(idx);
        let mut v: Vec<f64> = col.iter().copied().collect();
        // pin the sign: largest-magnitude loading positive
        let lead = v
            .iter()
            .cloned()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if lead < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        components.push(v);
        explained.push(eigen.eigenvalues[idx].max(0.0));
    }

    let columns: Vec<ColumnMeta> = (0..retained)
        .map(|i| ColumnMeta {
            name: format!("pc{}", i + 1),
            electrode: String::new(),
            kind: FeatureKind::Component,
            band: None,
        })
        .collect();
    let mut values = Vec::with_capacity(n * retained);
    for r in 0..n {
        for comp in &components {
            values.push(
                comp.iter()
                    .enumerate()
                    .map(|(c, w)| w * (m.value(r, c) - mean[c]))
                    .sum(),
            );
        }
    }
    let scores = FeatureMatrix::from_parts(columns, m.rows_meta().to_vec(), values)?;
    Ok(PcaReduction {
        scores,
        components,
        mean,
        explained_variance: explained,
        threshold: variance_threshold,
    })
}
