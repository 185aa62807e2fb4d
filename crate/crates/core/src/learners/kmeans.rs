//! K-means with city-block distance — component-wise median centroids,
//! distance-proportional seeding — plus the average-silhouette index.

use super::LearnError;
use crate::features::FeatureMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ITERATIONS: usize = 300;
const RESTARTS: u64 = 5;

/// Clustering outcome of the best restart: assignments, centroids, the
/// average silhouette, the final within-cluster cost and its per-iteration
/// trace.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClusterResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub avg_silhouette: f64,
    pub cost: f64,
    pub cost_trace: Vec<f64>,
}

/// Sum of absolute coordinate differences.
pub fn city_block(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn median_inplace(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

struct Run {
    assignments: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    cost: f64,
    cost_trace: Vec<f64>,
}

fn seed_centroids(m: &FeatureMatrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = m.n_rows();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(m.row(rng.gen_range(0..n)).to_vec());
    while centroids.len() < k {
        let dists: Vec<f64> = (0..n)
            .map(|r| {
                centroids
                    .iter()
                    .map(|c| city_block(m.row(r), c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let total: f64 = dists.iter().sum();
        let pick = if total > 0.0 {
            // distance-proportional sampling over the remaining spread
            let mut u = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (r, d) in dists.iter().enumerate() {
                if u < *d {
                    chosen = r;
                    break;
                }
                u -= d;
            }
            chosen
        } else {
            // all points coincide with a centroid; any row works
            0
        };
        centroids.push(m.row(pick).to_vec());
    }
    centroids
}

fn lloyd(m: &FeatureMatrix, k: usize, seed: u64) -> Run {
    let n = m.n_rows();
    let d = m.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(m, k, &mut rng);
    let mut assignments = vec![usize::MAX; n];
    let mut cost_trace = Vec::new();

    for _iter in 0..MAX_ITERATIONS {
        // assignment: nearest centroid, ties to the lower cluster index
        let mut next = vec![0usize; n];
        for r in 0..n {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let dist = city_block(m.row(r), centroid);
                if dist < best_d {
                    best_d = dist;
                    best = c;
                }
            }
            next[r] = best;
        }
        // repopulate empty clusters from the point farthest from their
        // stale centroid (donor cluster must keep at least one member)
        let mut sizes = vec![0usize; k];
        for &a in &next {
            sizes[a] += 1;
        }
        for c in 0..k {
            if sizes[c] > 0 {
                continue;
            }
            let mut donor: Option<usize> = None;
            let mut farthest = f64::NEG_INFINITY;
            for r in 0..n {
                if sizes[next[r]] < 2 {
                    continue;
                }
                let dist = city_block(m.row(r), &centroids[c]);
                if dist > farthest {
                    farthest = dist;
                    donor = Some(r);
                }
            }
            if let Some(r) = donor {
                sizes[next[r]] -= 1;
                next[r] = c;
                sizes[c] += 1;
            }
        }

        let converged = next == assignments;
        assignments = next;

        // median update: the city-block centroid
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&r| assignments[r] == c).collect();
            if members.is_empty() {
                continue;
            }
            for j in 0..d {
                let mut column: Vec<f64> = members.iter().map(|&r| m.value(r, j)).collect();
                centroid[j] = median_inplace(&mut column);
            }
        }

        let cost: f64 = (0..n)
            .map(|r| city_block(m.row(r), &centroids[assignments[r]]))
            .sum();
        cost_trace.push(cost);
        if converged {
            break;
        }
    }

    let cost = *cost_trace.last().expect("at least one iteration");
    Run {
        assignments,
        centroids,
        cost,
        cost_trace,
    }
}

/// K-means over the matrix rows: best of 5 seeded restarts by total
/// within-cluster city-block cost.
pub fn kmeans(m: &FeatureMatrix, k: usize, seed: u64) -> Result<ClusterResult, LearnError> {
    if k < 2 {
        return Err(LearnError::Config(format!("k must be at least 2, got {k}")));
    }
    if k > m.n_rows() {
        return Err(LearnError::Config(format!(
            "k = {k} exceeds the {} rows",
            m.n_rows()
        )));
    }
    let mut best: Option<Run> = None;
    for restart in 0..RESTARTS {
        let run = lloyd(m, k, seed.wrapping_add(restart));
        if best.as_ref().is_none_or(|b| run.cost < b.cost) {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");
    let avg_silhouette = silhouette(m, &run.assignments)?;
    Ok(ClusterResult {
        assignments: run.assignments,
        centroids: run.centroids,
        avg_silhouette,
        cost: run.cost,
        cost_trace: run.cost_trace,
    })
}

/// Average silhouette with city-block dissimilarity. For element `e`,
/// `a(e)` is the mean distance to the rest of its cluster, `b(e)` the
/// smallest mean distance to another cluster, and
/// `s(e) = (b − a)/max(a, b)`; singletons (and `a = b = 0`) score 0.
pub fn silhouette(m: &FeatureMatrix, assignments: &[usize]) -> Result<f64, LearnError> {
    let n = m.n_rows();
    if assignments.len() != n {
        return Err(LearnError::Config(format!(
            "{} assignments for {n} rows",
            assignments.len()
        )));
    }
    let k = assignments.iter().max().map_or(0, |&c| c + 1);
    let mut sizes = vec![0usize; k];
    for &a in assignments {
        sizes[a] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(LearnError::Config(
            "silhouette needs more than one cluster".into(),
        ));
    }

    let mut total = 0.0;
    for e in 0..n {
        let own = assignments[e];
        if sizes[own] == 1 {
            continue; // singleton convention: s(e) = 0
        }
        let mut sums = vec![0.0f64; k];
        for other in 0..n {
            if other != e {
                sums[assignments[other]] += city_block(m.row(e), m.row(other));
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        total += if denom > 0.0 { (b - a) / denom } else { 0.0 };
    }
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::test_util::matrix;

    fn two_clouds() -> FeatureMatrix {
        matrix(vec![
            vec![0.0, 0.1],
            vec![0.2, 0.0],
            vec![-0.1, 0.05],
            vec![0.05, -0.2],
            vec![10.0, 10.1],
            vec![10.2, 9.9],
            vec![9.8, 10.0],
            vec![10.05, 10.15],
        ])
    }

    /// Exhaustive best 2-partition by total within-cluster L1 cost around
    /// component-wise medians.
    fn brute_force_two_partition(m: &FeatureMatrix) -> Vec<usize> {
        let n = m.n_rows();
        let mut best_cost = f64::INFINITY;
        let mut best = vec![0; n];
        for mask in 1..(1u32 << n) - 1 {
            let assignment: Vec<usize> =
                (0..n).map(|r| ((mask >> r) & 1) as usize).collect();
            let mut cost = 0.0;
            for c in 0..2 {
                let members: Vec<usize> =
                    (0..n).filter(|&r| assignment[r] == c).collect();
                if members.is_empty() {
                    continue;
                }
                for j in 0..m.n_cols() {
                    let mut col: Vec<f64> =
                        members.iter().map(|&r| m.value(r, j)).collect();
                    let med = median_inplace(&mut col);
                    cost += members
                        .iter()
                        .map(|&r| (m.value(r, j) - med).abs())
                        .sum::<f64>();
                }
            }
            if cost < best_cost {
                best_cost = cost;
                best = assignment;
            }
        }
        best
    }

    #[test]
    fn separates_two_point_clouds() {
        let m = two_clouds();
        let result = kmeans(&m, 2, 11).unwrap();
        let optimal = brute_force_two_partition(&m);
        // same partition up to cluster relabeling
        let flip = result.assignments[0] != optimal[0];
        for (got, want) in result.assignments.iter().zip(&optimal) {
            let got = if flip { 1 - got } else { *got };
            assert_eq!(got, *want);
        }
        assert!(result.avg_silhouette > 0.9);
    }

    #[test]
    fn k_equal_rows_gives_zero_cost() {
        let m = matrix(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let result = kmeans(&m, 4, 5).unwrap();
        assert_eq!(result.cost, 0.0);
        let mut seen = result.assignments.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        assert_eq!(result.avg_silhouette, 0.0); // all singletons
    }

    #[test]
    fn duplicated_rows_keep_centroids() {
        let m = two_clouds();
        let mut doubled_rows = Vec::new();
        for r in 0..m.n_rows() {
            doubled_rows.push(m.row(r).to_vec());
            doubled_rows.push(m.row(r).to_vec());
        }
        let doubled = matrix(doubled_rows);
        let a = kmeans(&m, 2, 9).unwrap();
        let b = kmeans(&doubled, 2, 9).unwrap();
        let mut ca = a.centroids.clone();
        let mut cb = b.centroids.clone();
        ca.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cb.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in ca.iter().zip(&cb) {
            for (u, v) in x.iter().zip(y) {
                assert!((u - v).abs() < 1e-9, "{u} vs {v}");
            }
        }
    }

    #[test]
    fn cost_trace_never_increases() {
        let m = two_clouds();
        for seed in 0..20 {
            let result = kmeans(&m, 3, seed).unwrap();
            for w in result.cost_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "trace {:?}", result.cost_trace);
            }
        }
    }

    #[test]
    fn k_larger_than_rows_is_config_error() {
        let m = matrix(vec![vec![0.0], vec![1.0]]);
        assert!(matches!(kmeans(&m, 3, 0), Err(LearnError::Config(_))));
    }

    #[test]
    fn deterministic_per_seed() {
        let m = two_clouds();
        let a = kmeans(&m, 2, 33).unwrap();
        let b = kmeans(&m, 2, 33).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.cost, b.cost);
    }

    #[test]
    fn silhouette_of_tight_far_clusters_is_one() {
        let m = matrix(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![9.0, 9.0],
            vec![9.0, 9.0],
        ]);
        let s = silhouette(&m, &[0, 0, 1, 1]).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn silhouette_of_identical_points_is_zero() {
        let m = matrix(vec![vec![1.0]; 6]);
        let s = silhouette(&m, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn silhouette_matches_hand_computation() {
        // {0,1,2} vs {10,11,12} in one dimension
        let m = matrix(vec![
            vec![0.0],
            vec![1.0],
            vec![2.0],
            vec![10.0],
            vec![11.0],
            vec![12.0],
        ]);
        let s = silhouette(&m, &[0, 0, 0, 1, 1, 1]).unwrap();
        // element 0: a = (1+2)/2 = 1.5, b = (10+11+12)/3 = 11 → 9.5/11
        // element 1: a = 1, b = 10 → 9/10; element 2: a = 1.5, b = 9 → 7.5/9
        let per = [
            9.5 / 11.0,
            9.0 / 10.0,
            7.5 / 9.0,
            7.5 / 9.0,
            9.0 / 10.0,
            9.5 / 11.0,
        ];
        let want: f64 = per.iter().sum::<f64>() / 6.0;
        assert!((s - want).abs() < 1e-12, "{s} vs {want}");
    }

    #[test]
    fn one_cluster_is_config_error() {
        let m = matrix(vec![vec![0.0], vec![1.0]]);
        assert!(matches!(
            silhouette(&m, &[0, 0]),
            Err(LearnError::Config(_))
        ));
    }

    #[test]
    fn silhouette_invariant_under_index_permutation() {
        let m = two_clouds();
        let s1 = silhouette(&m, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        let s2 = silhouette(&m, &[1, 1, 1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(s1, s2);
    }
}
