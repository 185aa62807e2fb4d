//! Soft-margin linear SVM trained by deterministic dual coordinate descent,
//! wrapped in stratified k-fold cross-validation. Multiclass problems use
//! one-vs-one voting.

use super::{LabeledData, LearnError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const C: f64 = 1.0;
const MAX_PASSES: usize = 10_000;
const TOLERANCE: f64 = 1e-4;

/// Pooled cross-validated accuracy. `folds_reduced` flags that the fold
/// count was lowered to the smallest class size.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct CvAccuracy {
    pub value: f64,
    pub folds_used: usize,
    pub folds_reduced: bool,
}

/// Weight vector over the features augmented with a constant-1 bias column.
struct BinarySvm {
    w: Vec<f64>,
}

impl BinarySvm {
    fn decision(&self, x: &[f64]) -> f64 {
        let mut d = self.w[x.len()]; // bias
        for (wi, xi) in self.w.iter().zip(x) {
            d += wi * xi;
        }
        d
    }
}

/// L1-loss dual coordinate descent with a fixed cyclic update order.
fn train_binary(rows: &[&[f64]], ys: &[f64]) -> BinarySvm {
    let n = rows.len();
    let dim = rows.first().map_or(0, |r| r.len()) + 1;
    let mut w = vec![0.0; dim];
    let mut alpha = vec![0.0; n];
    // Q_ii over the augmented sample
    let q: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>() + 1.0)
        .collect();

    for _pass in 0..MAX_PASSES {
        let mut max_violation = 0.0f64;
        for i in 0..n {
            let xi = rows[i];
            let g = ys[i] * (w[dim - 1] + xi.iter().zip(&w).map(|(x, wi)| x * wi).sum::<f64>())
                - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= C {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / q[i]).clamp(0.0, C);
                let delta = (alpha[i] - old) * ys[i];
                if delta != 0.0 {
                    for (wj, xj) in w.iter_mut().zip(xi) {
                        *wj += delta * xj;
                    }
                    w[dim - 1] += delta;
                }
            }
        }
        if max_violation < TOLERANCE {
            break;
        }
    }
    BinarySvm { w }
}

/// One-vs-one committee over the sorted class list.
struct OvoSvm {
    classes: Vec<String>,
    /// One machine per (a, b) pair with a < b in class order; positive
    /// decision votes for `a`.
    machines: Vec<(usize, usize, BinarySvm)>,
}

impl OvoSvm {
    fn train(rows: &[&[f64]], labels: &[&str], classes: &[String]) -> Self {
        let mut machines = Vec::new();
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                let mut pair_rows = Vec::new();
                let mut ys = Vec::new();
                for (r, l) in rows.iter().zip(labels) {
                    if *l == classes[a] {
                        pair_rows.push(*r);
                        ys.push(1.0);
                    } else if *l == classes[b] {
                        pair_rows.push(*r);
                        ys.push(-1.0);
                    }
                }
                machines.push((a, b, train_binary(&pair_rows, &ys)));
            }
        }
        Self {
            classes: classes.to_vec(),
            machines,
        }
    }

    fn predict(&self, x: &[f64]) -> usize {
        let k = self.classes.len();
        let mut votes = vec![0usize; k];
        let mut margin = vec![0.0f64; k];
        for (a, b, svm) in &self.machines {
            let d = svm.decision(x);
            if d >= 0.0 {
                votes[*a] += 1;
            } else {
                votes[*b] += 1;
            }
            margin[*a] += d;
            margin[*b] -= d;
        }
        // max votes, ties by total decision-value margin, then class order
        let mut best = 0usize;
        for c in 1..k {
            if votes[c] > votes[best]
                || (votes[c] == votes[best] && margin[c] > margin[best])
            {
                best = c;
            }
        }
        best
    }
}

/// Deterministic stratified fold assignment: classes processed in sorted
/// order, each class's row indices shuffled by the seeded stream and dealt
/// round-robin.
fn stratified_folds(labels: &[String], folds: usize, seed: u64) -> Vec<usize> {
    let mut classes: Vec<&String> = labels.iter().collect();
    classes.sort();
    classes.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    let mut counter = 0usize;
    for class in classes {
        let mut idxs: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| *l == class)
            .map(|(i, _)| i)
            .collect();
        idxs.shuffle(&mut rng);
        for idx in idxs {
            assignment[idx] = counter % folds;
            counter += 1;
        }
    }
    assignment
}

/// Out-of-fold predictions for every row, with the effective fold count.
pub(crate) fn cv_predictions(
    data: &LabeledData,
    folds: usize,
    seed: u64,
) -> Result<(Vec<String>, usize, bool), LearnError> {
    if data.matrix().n_cols() == 0 {
        return Err(LearnError::Config("empty feature mask".into()));
    }
    let classes = data.classes();
    if classes.len() < 2 {
        return Err(LearnError::Config(format!(
            "supervised evaluation needs at least 2 classes, got {}",
            classes.len()
        )));
    }
    if folds < 2 {
        return Err(LearnError::Config(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let min_class = classes
        .iter()
        .map(|c| data.labels().iter().filter(|l| *l == c).count())
        .min()
        .unwrap_or(0);
    if min_class < 2 {
        return Err(LearnError::Config(format!(
            "smallest class holds {min_class} instances; need at least 2"
        )));
    }
    let folds_used = folds.min(min_class);
    let reduced = folds_used < folds;

    let assignment = stratified_folds(data.labels(), folds_used, seed);
    let m = data.matrix();
    let mut predictions = vec![String::new(); m.n_rows()];
    for fold in 0..folds_used {
        let mut train_rows: Vec<&[f64]> = Vec::new();
        let mut train_labels: Vec<&str> = Vec::new();
        for r in 0..m.n_rows() {
            if assignment[r] != fold {
                train_rows.push(m.row(r));
                train_labels.push(&data.labels()[r]);
            }
        }
        let model = OvoSvm::train(&train_rows, &train_labels, &classes);
        for r in 0..m.n_rows() {
            if assignment[r] == fold {
                predictions[r] = classes[model.predict(m.row(r))].clone();
            }
        }
    }
    Ok((predictions, folds_used, reduced))
}

/// Stratified k-fold cross-validated accuracy of the linear SVM, pooled
/// across folds (correct / total).
pub fn svm_cv_accuracy(
    data: &LabeledData,
    folds: usize,
    seed: u64,
) -> Result<CvAccuracy, LearnError> {
    let (predictions, folds_used, reduced) = cv_predictions(data, folds, seed)?;
    let correct = predictions
        .iter()
        .zip(data.labels())
        .filter(|(p, l)| p == l)
        .count();
    Ok(CvAccuracy {
        value: correct as f64 / predictions.len() as f64,
        folds_used,
        folds_reduced: reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{ColumnMeta, FeatureKind, FeatureMatrix, RowMeta};
    use rand::Rng;

    pub(crate) fn matrix_from_rows(rows: Vec<Vec<f64>>, labels: &[&str]) -> LabeledData {
        let d = rows[0].len();
        let columns = (0..d)
            .map(|c| ColumnMeta {
                name: format!("f{c}"),
                electrode: String::new(),
                kind: FeatureKind::Activity,
                band: None,
            })
            .collect();
        let metas = labels
            .iter()
            .map(|l| RowMeta {
                subject: "t".into(),
                condition: l.to_string(),
            })
            .collect();
        let values = rows.into_iter().flatten().collect();
        LabeledData::from_matrix(FeatureMatrix::from_parts(columns, metas, values).unwrap())
    }

    /// Two Gaussian blobs in 2-D with the stated mean separation (in units
    /// of the within-class standard deviation).
    pub(crate) fn blobs(
        n_per_class: usize,
        separation: f64,
        seed: u64,
    ) -> (Vec<Vec<f64>>, Vec<&'static str>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2 {
            let center = if class == 0 { 0.0 } else { separation };
            for _ in 0..n_per_class {
                rows.push(vec![
                    center + rng.gen::<f64>() - 0.5,
                    center + rng.gen::<f64>() - 0.5,
                ]);
                labels.push(if class == 0 { "neg" } else { "pos" });
            }
        }
        (rows, labels)
    }

    /// Exhaustive separator search over a coarse grid of line angles and
    /// offsets; certifies the blobs are linearly separable at >= `target`.
    fn grid_separability(rows: &[Vec<f64>], labels: &[&str], target: f64) -> bool {
        let n = rows.len() as f64;
        for angle_step in 0..36 {
            let theta = angle_step as f64 * std::f64::consts::PI / 36.0;
            let (nx, ny) = (theta.cos(), theta.sin());
            let projections: Vec<f64> = rows.iter().map(|r| nx * r[0] + ny * r[1]).collect();
            let mut sorted = projections.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in sorted.windows(2) {
                let cut = (w[0] + w[1]) / 2.0;
                for sign in [1.0, -1.0] {
                    let correct = projections
                        .iter()
                        .zip(labels)
                        .filter(|(p, l)| (sign * (**p - cut) > 0.0) == (**l == "pos"))
                        .count() as f64;
                    if correct / n >= target {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn separable_blobs_reach_high_accuracy() {
        let (rows, labels) = blobs(50, 5.0, 40);
        assert!(grid_separability(&rows, &labels, 0.98), "oracle failed");
        let data = matrix_from_rows(rows, &labels);
        let acc = svm_cv_accuracy(&data, 10, 7).unwrap();
        assert!(acc.value >= 0.98, "accuracy {}", acc.value);
        assert_eq!(acc.folds_used, 10);
        assert!(!acc.folds_reduced);
    }

    #[test]
    fn permuted_labels_sit_near_chance() {
        let (rows, mut labels) = blobs(50, 5.0, 40);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        labels.shuffle(&mut rng);
        let data = matrix_from_rows(rows, &labels);
        let acc = svm_cv_accuracy(&data, 10, 7).unwrap().value;
        assert!((0.3..=0.7).contains(&acc), "accuracy {acc}");
    }

    #[test]
    fn duplicated_column_leaves_accuracy_unchanged() {
        let (rows, labels) = blobs(40, 5.0, 8);
        let single: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0]]).collect();
        let doubled: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0], r[0]]).collect();
        let a1 = svm_cv_accuracy(&matrix_from_rows(single, &labels), 10, 3)
            .unwrap()
            .value;
        let a2 = svm_cv_accuracy(&matrix_from_rows(doubled, &labels), 10, 3)
            .unwrap()
            .value;
        assert_eq!(a1, a2);
    }

    #[test]
    fn single_class_is_config_error() {
        let data = matrix_from_rows(vec![vec![1.0], vec![2.0], vec![3.0]], &["a", "a", "a"]);
        assert!(matches!(
            svm_cv_accuracy(&data, 2, 0),
            Err(LearnError::Config(_))
        ));
    }

    #[test]
    fn empty_mask_is_config_error() {
        let (rows, labels) = blobs(5, 5.0, 1);
        let data = matrix_from_rows(rows, &labels);
        let masked = data.masked(&[false; 2]).unwrap();
        assert!(matches!(
            svm_cv_accuracy(&masked, 2, 0),
            Err(LearnError::Config(_))
        ));
    }

    #[test]
    fn folds_reduced_for_small_classes() {
        let (rows, labels) = blobs(4, 5.0, 2);
        let data = matrix_from_rows(rows, &labels);
        let acc = svm_cv_accuracy(&data, 10, 0).unwrap();
        assert_eq!(acc.folds_used, 4);
        assert!(acc.folds_reduced);
    }

    #[test]
    fn deterministic_under_fixed_seed_and_canonical_order() {
        let (rows, labels) = blobs(30, 3.0, 15);
        // canonical key: sort rows (with labels) lexicographically
        let mut paired: Vec<(Vec<f64>, &str)> = rows.into_iter().zip(labels).collect();
        paired.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let sorted_rows: Vec<Vec<f64>> = paired.iter().map(|(r, _)| r.clone()).collect();
        let sorted_labels: Vec<&str> = paired.iter().map(|(_, l)| *l).collect();
        let a1 = svm_cv_accuracy(&matrix_from_rows(sorted_rows.clone(), &sorted_labels), 10, 9)
            .unwrap()
            .value;
        // permute, then restore the canonical order: identical accuracy
        let mut shuffled = paired.clone();
        shuffled.reverse();
        shuffled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let rows2: Vec<Vec<f64>> = shuffled.iter().map(|(r, _)| r.clone()).collect();
        let labels2: Vec<&str> = shuffled.iter().map(|(_, l)| *l).collect();
        let a2 = svm_cv_accuracy(&matrix_from_rows(rows2, &labels2), 10, 9)
            .unwrap()
            .value;
        assert_eq!(a1, a2);
    }

    #[test]
    fn three_class_one_vs_one_votes() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (c, center) in [(0.0, 0.0), (8.0, 0.0), (0.0, 8.0)].iter().enumerate() {
            for _ in 0..20 {
                rows.push(vec![
                    center.0 + rng.gen::<f64>() - 0.5,
                    center.1 + rng.gen::<f64>() - 0.5,
                ]);
                labels.push(["a", "b", "c"][c]);
            }
        }
        let data = matrix_from_rows(rows, &labels);
        let acc = svm_cv_accuracy(&data, 10, 5).unwrap().value;
        assert!(acc >= 0.95, "3-class accuracy {acc}");
    }
}
