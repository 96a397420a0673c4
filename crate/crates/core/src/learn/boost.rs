//! AdaBoost.M1 over random-undersampled, weight-proportional resamples
//! (RUSBoost-style), with depth-3 CART base learners.

use rand::seq::SliceRandom;

use super::tree::{DecisionTree, TreeParams};
use crate::matrix::Matrix;
use crate::random::{derive_rng, weighted_index, ChaCha8Rng};
use crate::scalar::Scalar;

pub const RUSADA_ROUNDS: usize = 50;
pub const RUSADA_DEPTH: usize = 3;

#[derive(Debug, Clone)]
pub struct RusAdaBoost<S> {
    rounds: Vec<(DecisionTree<S>, S)>,
    /// Sum of the boosting weight distribution after each round's
    /// normalization; each entry must be 1 up to rounding.
    pub weight_sums: Vec<S>,
    /// Training prior, used as the score when no round survives.
    fallback: S,
}

impl<S: Scalar> RusAdaBoost<S> {
    pub fn fit(x: &Matrix<S>, y: &[bool], seed: u64) -> Self {
        let n = x.rows();
        let labels: Vec<usize> = y.iter().map(|&l| usize::from(l)).collect();
        let minority_label = {
            let pos = y.iter().filter(|&&l| l).count();
            pos * 2 <= n
        };
        let minority: Vec<usize> = (0..n).filter(|&i| y[i] == minority_label).collect();
        let majority: Vec<usize> = (0..n).filter(|&i| y[i] != minority_label).collect();
        let params = TreeParams {
            max_depth: Some(RUSADA_DEPTH),
            ..TreeParams::default()
        };

        let nf = S::from_n(n);
        let mut weights = vec![S::one() / nf; n];
        let mut rounds = Vec::new();
        let mut weight_sums = Vec::new();
        let eps = S::from_f(1e-10);
        for round in 0..RUSADA_ROUNDS {
            let mut rng: ChaCha8Rng = derive_rng(seed, round as u64);
            // Undersample: all minority plus an equal-size majority draw.
            let mut pool = minority.clone();
            let mut majority_pick = majority.clone();
            majority_pick.shuffle(&mut rng);
            majority_pick.truncate(minority.len().min(majority.len()));
            pool.extend(majority_pick);
            pool.sort_unstable();
            // Weight-proportional bootstrap of the pool.
            let pool_weights: Vec<S> = pool.iter().map(|&i| weights[i]).collect();
            let sample: Vec<usize> = (0..pool.len())
                .map(|_| pool[weighted_index(&mut rng, &pool_weights)])
                .collect();
            let tree = DecisionTree::fit_indices(x, &labels, sample, 2, &params, &mut rng);

            let mut err = S::zero();
            for i in 0..n {
                if tree.predict(x.row(i)) != labels[i] {
                    err += weights[i];
                }
            }
            if err >= S::from_f(0.5) {
                break;
            }
            let bounded = err.max(eps);
            let alpha = ((S::one() - bounded) / bounded).ln();
            let beta = bounded / (S::one() - bounded);
            for i in 0..n {
                if tree.predict(x.row(i)) == labels[i] {
                    weights[i] = weights[i] * beta;
                }
            }
            let total: S = weights.iter().copied().sum();
            for w in &mut weights {
                *w = *w / total;
            }
            weight_sums.push(weights.iter().copied().sum());
            rounds.push((tree, alpha));
            if err <= eps {
                break;
            }
        }
        let pos = y.iter().filter(|&&l| l).count();
        Self {
            rounds,
            weight_sums,
            fallback: S::from_n(pos) / nf,
        }
    }

    /// Normalized weighted vote for the positive class.
    pub fn score(&self, row: &[S]) -> S {
        if self.rounds.is_empty() {
            return self.fallback;
        }
        let mut vote = S::zero();
        let mut total = S::zero();
        for (tree, alpha) in &self.rounds {
            total += *alpha;
            if tree.predict(row) == 1 {
                vote += *alpha;
            }
        }
        if total > S::zero() {
            vote / total
        } else {
            self.fallback
        }
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imbalanced_separable() -> (Matrix<f64>, Vec<bool>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..40 {
            rows.push(vec![i as f64 * 0.01, 1.0]);
            y.push(false);
        }
        for i in 0..8 {
            rows.push(vec![2.0 + i as f64 * 0.01, -1.0]);
            y.push(true);
        }
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn weights_stay_normalized_every_round() {
        let (x, y) = imbalanced_separable();
        let model = RusAdaBoost::fit(&x, &y, 13);
        assert!(model.n_rounds() >= 1);
        for &s in &model.weight_sums {
            assert!((s - 1.0).abs() <= 1e-9, "weight sum {s}");
        }
    }

    #[test]
    fn separable_data_is_classified() {
        let (x, y) = imbalanced_separable();
        let model = RusAdaBoost::fit(&x, &y, 5);
        for i in 0..x.rows() {
            assert_eq!(model.score(x.row(i)) >= 0.5, y[i]);
        }
    }

    #[test]
    fn label_noise_flips_terminate_early() {
        // Pure noise: a depth-3 tree cannot reach weighted error < 0.5 for
        // long; boosting must stop rather than run all rounds with junk.
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![(i % 2) as f64]).collect();
        let x = Matrix::from_rows(&rows);
        let y: Vec<bool> = (0..40).map(|i| (i / 2) % 2 == 0).collect();
        let model = RusAdaBoost::fit(&x, &y, 3);
        assert!(model.n_rounds() <= RUSADA_ROUNDS);
        let s = model.score(x.row(0));
        assert!((0.0..=1.0).contains(&s));
    }
}
