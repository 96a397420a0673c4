//! Random forest and balanced random forest.
//!
//! 100 trees by default, sqrt(d) features per split, majority vote. The
//! balanced variant draws a class-balanced bootstrap per tree (minority-count
//! samples from each class, with replacement) and records the per-tree class
//! counts so balance is externally checkable.

use rand::Rng;
use rayon::prelude::*;

use super::tree::{DecisionTree, TreeParams};
use crate::matrix::Matrix;
use crate::random::derive_rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Balanced bootstrap per tree instead of a plain n-sample bootstrap.
    pub balanced: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            balanced: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest<S> {
    trees: Vec<DecisionTree<S>>,
    pub n_classes: usize,
    /// Class counts of each tree's bootstrap sample.
    pub bootstrap_class_counts: Vec<Vec<usize>>,
}

fn sqrt_features(d: usize) -> usize {
    ((d as f64).sqrt().floor() as usize).max(1)
}

impl<S: Scalar> RandomForest<S> {
    pub fn fit(
        x: &Matrix<S>,
        y: &[usize],
        n_classes: usize,
        params: &ForestParams,
        seed: u64,
    ) -> Self {
        let n = x.rows();
        let by_class: Vec<Vec<usize>> = (0..n_classes)
            .map(|c| (0..n).filter(|&i| y[i] == c).collect())
            .collect();
        let min_class = by_class
            .iter()
            .map(Vec::len)
            .filter(|&l| l > 0)
            .min()
            .unwrap_or(0);
        let tree_params = TreeParams {
            max_features: Some(sqrt_features(x.cols())),
            ..TreeParams::default()
        };
        let fitted: Vec<(DecisionTree<S>, Vec<usize>)> = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = derive_rng(seed, t as u64);
                let idx: Vec<usize> = if params.balanced {
                    let mut idx = Vec::with_capacity(min_class * n_classes);
                    for class_idx in &by_class {
                        if class_idx.is_empty() {
                            continue;
                        }
                        for _ in 0..min_class {
                            idx.push(class_idx[rng.gen_range(0..class_idx.len())]);
                        }
                    }
                    idx
                } else {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                };
                let mut counts = vec![0usize; n_classes];
                for &i in &idx {
                    counts[y[i]] += 1;
                }
                let tree = DecisionTree::fit_indices(x, y, idx, n_classes, &tree_params, &mut rng);
                (tree, counts)
            })
            .collect();
        let (trees, bootstrap_class_counts) = fitted.into_iter().unzip();
        Self {
            trees,
            n_classes,
            bootstrap_class_counts,
        }
    }

    /// Votes per class across all trees.
    pub fn votes(&self, row: &[S]) -> Vec<usize> {
        let mut votes = vec![0usize; self.n_classes];
        for tree in &self.trees {
            votes[tree.predict(row)] += 1;
        }
        votes
    }

    /// Majority vote of the tree predictions; ties break toward the lower
    /// class index.
    pub fn predict(&self, row: &[S]) -> usize {
        let votes = self.votes(row);
        let mut best = 0usize;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best
    }

    /// Fraction of trees voting class 1.
    pub fn positive_vote_fraction(&self, row: &[S]) -> S {
        let votes = self.votes(row);
        S::from_n(votes.get(1).copied().unwrap_or(0)) / S::from_n(self.trees.len())
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Normalized mean decrease in impurity across trees.
    pub fn feature_importances(&self, d: usize) -> Vec<S> {
        let mut acc = vec![S::zero(); d];
        for tree in &self.trees {
            for (a, v) in acc.iter_mut().zip(tree.feature_importances()) {
                *a += v;
            }
        }
        let total: S = acc.iter().copied().sum();
        if total > S::zero() {
            for a in &mut acc {
                *a = *a / total;
            }
        } else {
            // No split anywhere: fall back to a uniform attribution.
            let uniform = S::one() / S::from_n(d.max(1));
            for a in &mut acc {
                *a = uniform;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_imbalanced() -> (Matrix<f64>, Vec<usize>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..30 {
            rows.push(vec![i as f64 * 0.01, 0.0]);
            y.push(0);
        }
        for i in 0..6 {
            rows.push(vec![1.0 + i as f64 * 0.01, 0.0]);
            y.push(1);
        }
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn balanced_bootstraps_have_equal_class_counts() {
        let (x, y) = toy_imbalanced();
        let forest = RandomForest::fit(
            &x,
            &y,
            2,
            &ForestParams {
                n_trees: 25,
                balanced: true,
            },
            7,
        );
        for counts in &forest.bootstrap_class_counts {
            assert_eq!(counts[0], 6);
            assert_eq!(counts[1], 6);
        }
    }

    #[test]
    fn forest_prediction_is_majority_vote() {
        let (x, y) = toy_imbalanced();
        let forest = RandomForest::fit(&x, &y, 2, &ForestParams::default(), 3);
        for i in 0..x.rows() {
            let votes = forest.votes(x.row(i));
            let majority = if votes[1] > votes[0] { 1 } else { 0 };
            assert_eq!(forest.predict(x.row(i)), majority);
        }
    }

    #[test]
    fn forests_are_seed_deterministic() {
        let (x, y) = toy_imbalanced();
        let a = RandomForest::fit(&x, &y, 2, &ForestParams::default(), 11);
        let b = RandomForest::fit(&x, &y, 2, &ForestParams::default(), 11);
        for i in 0..x.rows() {
            assert_eq!(
                a.positive_vote_fraction(x.row(i)),
                b.positive_vote_fraction(x.row(i))
            );
        }
    }
}
