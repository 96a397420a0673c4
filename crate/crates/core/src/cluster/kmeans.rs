//! Lloyd's k-means with k-means++ seeding.
//!
//! Assignment ties break toward the lower centroid index; empty clusters are
//! re-seeded to the point farthest from its assigned centroid. Inertia is
//! asserted non-increasing across iterations.

use rand::Rng;

use super::ClusterError;
use crate::matrix::{squared_distance, Matrix};
use crate::random::{derive_rng, unit};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ClusterResult<S> {
    /// Cluster index per input row.
    pub assignments: Vec<usize>,
    pub centroids: Matrix<S>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: S,
    pub iterations: usize,
    /// Inertia after each assignment step.
    pub inertia_history: Vec<S>,
}

fn nearest<S: Scalar>(row: &[S], centroids: &Matrix<S>) -> (usize, S) {
    let mut best = 0usize;
    let mut best_d = S::infinity();
    for c in 0..centroids.rows() {
        let d = squared_distance(row, centroids.row(c));
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    (best, best_d)
}

/// k-means++ initial centroids: first uniform, the rest weighted by the
/// squared distance to the nearest chosen centroid.
fn plus_plus_init<S: Scalar>(x: &Matrix<S>, k: usize, rng: &mut impl Rng) -> Vec<Vec<S>> {
    let n = x.rows();
    let mut centroids: Vec<Vec<S>> = Vec::with_capacity(k);
    centroids.push(x.row(rng.gen_range(0..n)).to_vec());
    let mut d2: Vec<S> = (0..n)
        .map(|i| squared_distance(x.row(i), &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: S = d2.iter().copied().sum();
        let next = if total > S::zero() {
            let target = unit::<S>(rng) * total;
            let mut acc = S::zero();
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if target < acc {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // All remaining mass is zero (duplicate-heavy input).
            rng.gen_range(0..n)
        };
        centroids.push(x.row(next).to_vec());
        for i in 0..n {
            let d = squared_distance(x.row(i), centroids.last().unwrap());
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

pub fn kmeans<S: Scalar>(
    x: &Matrix<S>,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusterResult<S>, ClusterError> {
    let n = x.rows();
    if k == 0 || k > n {
        return Err(ClusterError::KTooLarge { k, n });
    }
    if !x.is_finite() {
        return Err(ClusterError::NonFiniteInput);
    }
    let d = x.cols();
    let mut rng = derive_rng(seed, 0);
    let mut centroids = Matrix::from_rows(&plus_plus_init(x, k, &mut rng));
    let mut assignments = vec![0usize; n];
    let mut inertia_history: Vec<S> = Vec::new();
    let mut iterations = 0usize;
    for _ in 0..max_iter.max(1) {
        iterations += 1;
        // Assignment step.
        let mut changed = false;
        let mut inertia = S::zero();
        for i in 0..n {
            let (c, dist) = nearest(x.row(i), &centroids);
            inertia += dist;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        if let Some(&prev) = inertia_history.last() {
            assert!(
                inertia <= prev * (S::one() + S::from_f(1e-12)) + S::from_f(1e-30),
                "k-means inertia increased: {inertia} after {prev}"
            );
        }
        inertia_history.push(inertia);
        if !changed && inertia_history.len() > 1 {
            break;
        }
        // Update step.
        let mut sums: Matrix<S> = Matrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[assignments[i]] += 1;
            let row = x.row(i);
            let acc = sums.row_mut(assignments[i]);
            for (a, &v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
        let mut stolen: Vec<usize> = Vec::new();
        for c in 0..k {
            if counts[c] > 0 {
                let cf = S::from_n(counts[c]);
                let row = sums.row(c).to_vec();
                for (j, v) in row.into_iter().enumerate() {
                    centroids.set(c, j, v / cf);
                }
            }
        }
        // Re-seed empty clusters with the point farthest from its centroid.
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let mut far_i = usize::MAX;
            let mut far_d = -S::one();
            for i in 0..n {
                if stolen.contains(&i) || counts[assignments[i]] <= 1 {
                    continue;
                }
                let dist = squared_distance(x.row(i), centroids.row(assignments[i]));
                if dist > far_d {
                    far_d = dist;
                    far_i = i;
                }
            }
            if far_i == usize::MAX {
                continue;
            }
            let row = x.row(far_i).to_vec();
            for (j, v) in row.into_iter().enumerate() {
                centroids.set(c, j, v);
            }
            counts[assignments[far_i]] -= 1;
            counts[c] = 1;
            assignments[far_i] = c;
            stolen.push(far_i);
        }
    }
    let inertia = *inertia_history.last().expect("at least one iteration");
    Ok(ClusterResult {
        assignments,
        centroids,
        inertia,
        iterations,
        inertia_history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::ward::adjusted_rand_index;
    use crate::random::gaussian;

    #[test]
    fn k_one_yields_global_mean_and_total_sse() {
        let x: Matrix<f64> = Matrix::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![4.0, 6.0]]);
        let r = kmeans(&x, 1, 5, 100).unwrap();
        assert!((r.centroids.get(0, 0) - 2.0).abs() < 1e-12);
        assert!((r.centroids.get(0, 1) - 2.0).abs() < 1e-12);
        let sse: f64 = (0..3)
            .map(|i| squared_distance(x.row(i), r.centroids.row(0)))
            .sum();
        assert!((r.inertia - sse).abs() < 1e-9);
    }

    #[test]
    fn k_equals_n_reaches_zero_inertia() {
        let x = Matrix::from_rows(&[vec![0.0], vec![5.0], vec![9.0], vec![14.0]]);
        let r = kmeans(&x, 4, 2, 100).unwrap();
        assert!(r.inertia < 1e-18);
        let mut sorted = r.assignments.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn well_separated_blobs_are_recovered() {
        let mut rng = derive_rng(31, 0);
        let centers = [
            [0.0, 0.0, 0.0],
            [10.0, 0.0, 0.0],
            [0.0, 10.0, 0.0],
            [0.0, 0.0, 10.0],
        ];
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (label, center) in centers.iter().enumerate() {
            for _ in 0..25 {
                let row: Vec<f64> = center
                    .iter()
                    .map(|&c| c + 0.05 * gaussian::<f64>(&mut rng))
                    .collect();
                rows.push(row);
                truth.push(label);
            }
        }
        let x = Matrix::from_rows(&rows);
        let r = kmeans(&x, 4, 7, 200).unwrap();
        assert!(adjusted_rand_index(&r.assignments, &truth) >= 0.99);
    }

    #[test]
    fn inertia_history_is_non_increasing() {
        let mut rng = derive_rng(8, 0);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| (0..4).map(|_| gaussian::<f64>(&mut rng)).collect())
            .collect();
        let x = Matrix::from_rows(&rows);
        let r = kmeans(&x, 5, 3, 100).unwrap();
        for pair in r.inertia_history.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        assert!(matches!(
            kmeans(&x, 3, 0, 10),
            Err(ClusterError::KTooLarge { k: 3, n: 2 })
        ));
        assert!(matches!(
            kmeans(&x, 0, 0, 10),
            Err(ClusterError::KTooLarge { k: 0, n: 2 })
        ));
    }

    #[test]
    fn same_seed_reproduces_the_partition() {
        let mut rng = derive_rng(9, 0);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..3).map(|_| gaussian::<f64>(&mut rng)).collect())
            .collect();
        let x = Matrix::from_rows(&rows);
        let a = kmeans(&x, 3, 12, 100).unwrap();
        let b = kmeans(&x, 3, 12, 100).unwrap();
        assert_eq!(a.assignments, b.assignments);
    }
}
