//! Exact t-SNE to two dimensions.
//!
//! Gaussian input affinities with per-point bandwidth found by binary search
//! so each conditional distribution's perplexity matches the target within a
//! 1e-4 relative tolerance; symmetrized and normalized joint affinities;
//! Student-t output kernel; gradient descent with early exaggeration (factor
//! 12 for the first 250 iterations), learning rate 200 and momentum 0.5
//! switching to 0.8 at iteration 250. Initialization is seeded Gaussian with
//! sigma 1e-4.

use rayon::prelude::*;

use super::ClusterError;
use crate::matrix::{squared_distance, Matrix};
use crate::random::{derive_rng, gaussian};
use crate::scalar::Scalar;

pub const EARLY_EXAGGERATION: f64 = 12.0;
pub const EXAGGERATION_ITERS: usize = 250;
pub const LEARNING_RATE: f64 = 200.0;
pub const MOMENTUM_EARLY: f64 = 0.5;
pub const MOMENTUM_LATE: f64 = 0.8;
pub const MOMENTUM_SWITCH_ITER: usize = 250;
pub const INIT_SIGMA: f64 = 1e-4;
pub const PERPLEXITY_REL_TOL: f64 = 1e-4;
const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Embedding2D<S> {
    /// One 2-d point per input row, in row order.
    pub coords: Vec<[S; 2]>,
    pub final_kl: S,
    pub seed: u64,
    /// Effective perplexity after clamping.
    pub perplexity: S,
    pub perplexity_clamped: bool,
}

/// Row-conditional Gaussian affinities (zero diagonal, rows sum to 1).
#[derive(Debug, Clone)]
pub struct CondAffinities<S> {
    pub probs: Matrix<S>,
}

impl<S: Scalar> CondAffinities<S> {
    /// Shannon entropy (nats) of one row; exp(entropy) is its perplexity.
    pub fn row_entropy(&self, i: usize) -> S {
        let mut h = S::zero();
        for &p in self.probs.row(i) {
            if p > S::zero() {
                h -= p * p.ln();
            }
        }
        h
    }
}

/// Per-row bandwidth search for the conditional affinity matrix.
pub fn conditional_affinities<S: Scalar>(
    x: &Matrix<S>,
    perplexity: S,
) -> Result<CondAffinities<S>, ClusterError> {
    let n = x.rows();
    if n < 4 {
        return Err(ClusterError::TooFewPoints { n, min: 4 });
    }
    if !x.is_finite() {
        return Err(ClusterError::NonFiniteInput);
    }
    let rows: Vec<Vec<S>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let d2: Vec<S> = (0..n)
                .map(|j| {
                    if i == j {
                        S::zero()
                    } else {
                        squared_distance(x.row(i), x.row(j))
                    }
                })
                .collect();
            bandwidth_row(&d2, i, perplexity)
        })
        .collect();
    let probs = Matrix::from_rows(&rows);
    // Rows must sum to 1 before symmetrization.
    for i in 0..n {
        let sum: S = probs.row(i).iter().copied().sum();
        assert!(
            (sum - S::one()).abs() < S::from_f(1e-6),
            "conditional affinity row {i} sums to {sum}"
        );
    }
    Ok(CondAffinities { probs })
}

/// Binary search on beta = 1/(2 sigma^2) until exp(H) matches the target
/// perplexity within the relative tolerance.
fn bandwidth_row<S: Scalar>(d2: &[S], skip: usize, perplexity: S) -> Vec<S> {
    let n = d2.len();
    // Shift by the min off-diagonal distance for exp stability.
    let mut min_d = S::infinity();
    for (j, &d) in d2.iter().enumerate() {
        if j != skip && d < min_d {
            min_d = d;
        }
    }
    let mut beta = S::one();
    let mut beta_lo = S::zero();
    let mut beta_hi = S::infinity();
    let mut weights = vec![S::zero(); n];
    for _ in 0..200 {
        let mut sum = S::zero();
        let mut weighted_d = S::zero();
        for j in 0..n {
            if j == skip {
                weights[j] = S::zero();
                continue;
            }
            let w = (-beta * (d2[j] - min_d)).exp();
            weights[j] = w;
            sum += w;
            weighted_d += w * (d2[j] - min_d);
        }
        // Entropy of the normalized distribution, in nats.
        let entropy = sum.ln() + beta * weighted_d / sum;
        let achieved = entropy.exp();
        if (achieved - perplexity).abs() <= S::from_f(PERPLEXITY_REL_TOL) * perplexity {
            break;
        }
        if achieved > perplexity {
            // Too flat: sharpen by raising beta.
            beta_lo = beta;
            beta = if beta_hi.is_infinite() {
                beta * S::from_f(2.0)
            } else {
                (beta + beta_hi) * S::from_f(0.5)
            };
        } else {
            beta_hi = beta;
            beta = (beta + beta_lo) * S::from_f(0.5);
        }
    }
    let total: S = weights.iter().copied().sum();
    weights.iter().map(|&w| w / total).collect()
}

/// Symmetrized, normalized joint affinities with a numeric floor.
pub fn joint_affinities<S: Scalar>(cond: &CondAffinities<S>) -> Matrix<S> {
    let n = cond.probs.rows();
    let mut joint = Matrix::zeros(n, n);
    let norm = S::from_f(2.0) * S::from_n(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = (cond.probs.get(i, j) + cond.probs.get(j, i)) / norm;
            joint.set(i, j, v.max(S::from_f(PROB_FLOOR)));
        }
    }
    let sum: S = (0..n)
        .map(|i| joint.row(i).iter().copied().sum::<S>())
        .sum();
    assert!(
        (sum - S::one()).abs() < S::from_f(1e-6),
        "joint affinities sum to {sum}"
    );
    joint
}

/// Seeded Gaussian initialization (sigma 1e-4), in row order.
pub fn initial_embedding<S: Scalar>(n: usize, seed: u64) -> Vec<[S; 2]> {
    let mut rng = derive_rng(seed, 0);
    let sigma = S::from_f(INIT_SIGMA);
    (0..n)
        .map(|_| [gaussian::<S>(&mut rng) * sigma, gaussian::<S>(&mut rng) * sigma])
        .collect()
}

/// Student-t kernel weights and their total over all ordered pairs.
fn student_t_weights<S: Scalar>(coords: &[[S; 2]]) -> (Matrix<S>, S) {
    let n = coords.len();
    let mut w = Matrix::zeros(n, n);
    let mut total = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            let v = S::one() / (S::one() + dx * dx + dy * dy);
            w.set(i, j, v);
            total += v;
        }
    }
    (w, total)
}

/// KL(P || Q) for an embedding, with the same floor the optimizer uses.
pub fn kl_divergence<S: Scalar>(p: &Matrix<S>, coords: &[[S; 2]]) -> S {
    let (w, total) = student_t_weights(coords);
    let n = coords.len();
    let floor = S::from_f(PROB_FLOOR);
    let mut kl = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pij = p.get(i, j);
            if pij > S::zero() {
                let qij = (w.get(i, j) / total).max(floor);
                kl += pij * (pij / qij).ln();
            }
        }
    }
    kl.max(S::zero())
}

/// Embeds rows of `x` into 2-d.
///
/// Perplexity above (n-1)/3 is clamped down (flagged in the result); the
/// reported KL divergence uses the un-exaggerated affinities.
pub fn tsne_embed<S: Scalar>(
    x: &Matrix<S>,
    seed: u64,
    perplexity: S,
    iterations: usize,
) -> Result<Embedding2D<S>, ClusterError> {
    let n = x.rows();
    if n < 4 {
        return Err(ClusterError::TooFewPoints { n, min: 4 });
    }
    if !x.is_finite() {
        return Err(ClusterError::NonFiniteInput);
    }
    let max_perplexity = S::from_n(n - 1) / S::from_f(3.0);
    let mut effective = perplexity;
    let mut clamped = false;
    if effective > max_perplexity {
        effective = max_perplexity;
        clamped = true;
    }
    if effective < S::one() {
        effective = S::one();
        clamped = true;
    }
    let cond = conditional_affinities(x, effective)?;
    let p = joint_affinities(&cond);

    let mut coords = initial_embedding::<S>(n, seed);
    let mut velocity = vec![[S::zero(); 2]; n];
    let exaggeration_until = EXAGGERATION_ITERS.min(iterations);
    let lr = S::from_f(LEARNING_RATE);
    for iter in 0..iterations {
        let exaggeration = if iter < exaggeration_until {
            S::from_f(EARLY_EXAGGERATION)
        } else {
            S::one()
        };
        let momentum = if iter < MOMENTUM_SWITCH_ITER {
            S::from_f(MOMENTUM_EARLY)
        } else {
            S::from_f(MOMENTUM_LATE)
        };
        let (w, total) = student_t_weights(&coords);
        let mut mean = [S::zero(); 2];
        for i in 0..n {
            let mut grad = [S::zero(); 2];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let wij = w.get(i, j);
                let qij = wij / total;
                let coeff = S::from_f(4.0) * (exaggeration * p.get(i, j) - qij) * wij;
                grad[0] += coeff * (coords[i][0] - coords[j][0]);
                grad[1] += coeff * (coords[i][1] - coords[j][1]);
            }
            for a in 0..2 {
                velocity[i][a] = momentum * velocity[i][a] - lr * grad[a];
            }
        }
        for i in 0..n {
            for a in 0..2 {
                coords[i][a] += velocity[i][a];
                mean[a] += coords[i][a];
            }
        }
        // Keep the embedding centered.
        for a in 0..2 {
            mean[a] = mean[a] / S::from_n(n);
        }
        for point in &mut coords {
            point[0] -= mean[0];
            point[1] -= mean[1];
        }
    }
    let final_kl = kl_divergence(&p, &coords);
    assert!(final_kl.is_finite() && final_kl >= S::zero());
    Ok(Embedding2D {
        coords,
        final_kl,
        seed,
        perplexity: effective,
        perplexity_clamped: clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{derive_rng, unit};

    fn random_matrix(n: usize, d: usize, seed: u64) -> Matrix<f64> {
        let mut rng = derive_rng(seed, 3);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| unit::<f64>(&mut rng) * 4.0).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    #[test]
    fn output_has_one_point_per_row() {
        let x = random_matrix(16, 5, 1);
        let e = tsne_embed(&x, 7, 4.0, 50).unwrap();
        assert_eq!(e.coords.len(), 16);
        assert!(!e.perplexity_clamped);
    }

    #[test]
    fn per_row_perplexity_matches_target() {
        let x = random_matrix(40, 8, 2);
        let target = 10.0;
        let cond = conditional_affinities(&x, target).unwrap();
        for i in 0..40 {
            let achieved = cond.row_entropy(i).exp();
            assert!(
                (achieved - target).abs() <= 1e-4 * target,
                "row {i}: {achieved}"
            );
        }
    }

    #[test]
    fn joint_affinities_are_symmetric_and_normalized() {
        let x = random_matrix(20, 6, 4);
        let cond = conditional_affinities(&x, 5.0).unwrap();
        let p = joint_affinities(&cond);
        let mut sum = 0.0;
        for i in 0..20 {
            for j in 0..20 {
                assert!((p.get(i, j) - p.get(j, i)).abs() < 1e-15);
                sum += p.get(i, j);
            }
        }
        assert!((sum - 1.0).abs() < 1e-6);
    }

    #[test]
    fn optimization_reduces_kl() {
        let x = random_matrix(30, 10, 6);
        let cond = conditional_affinities(&x, 8.0).unwrap();
        let p = joint_affinities(&cond);
        let initial = kl_divergence(&p, &initial_embedding::<f64>(30, 11));
        let e = tsne_embed(&x, 11, 8.0, 1000).unwrap();
        assert!(
            e.final_kl < initial,
            "final {} vs initial {initial}",
            e.final_kl
        );
    }

    #[test]
    fn excessive_perplexity_is_clamped() {
        let x = random_matrix(10, 3, 8);
        let e = tsne_embed(&x, 3, 50.0, 20).unwrap();
        assert!(e.perplexity_clamped);
        assert!((e.perplexity - 3.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_rejected() {
        let x = random_matrix(3, 3, 9);
        assert!(matches!(
            tsne_embed(&x, 0, 2.0, 10),
            Err(ClusterError::TooFewPoints { .. })
        ));
    }
}
