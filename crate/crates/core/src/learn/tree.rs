//! CART decision tree with Gini impurity.
//!
//! Supports multiclass labels (cluster characterization) and binary
//! classification. Splits minimize weighted Gini impurity; ties break toward
//! the lower feature index, then the lower threshold. Samples with
//! `x[feature] <= threshold` go left.

use crate::matrix::Matrix;
use crate::random::ChaCha8Rng;
use crate::scalar::Scalar;
use rand::seq::SliceRandom;

#[derive(Debug, Clone)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features considered per split; `None` means all.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Node<S> {
    Leaf {
        counts: Vec<usize>,
    },
    Split {
        feature: usize,
        threshold: S,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct DecisionTree<S> {
    nodes: Vec<Node<S>>,
    pub n_classes: usize,
    /// Unnormalized mean-decrease-in-impurity accumulator per feature.
    importances: Vec<S>,
}

fn gini<S: Scalar>(counts: &[usize], total: usize) -> S {
    if total == 0 {
        return S::zero();
    }
    let t = S::from_n(total);
    let mut acc = S::one();
    for &c in counts {
        let p = S::from_n(c) / t;
        acc -= p * p;
    }
    acc
}

struct Builder<'a, S> {
    x: &'a Matrix<S>,
    y: &'a [usize],
    n_classes: usize,
    params: &'a TreeParams,
    nodes: Vec<Node<S>>,
    importances: Vec<S>,
    n_root: usize,
}

impl<'a, S: Scalar> Builder<'a, S> {
    fn class_counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &i in idx {
            counts[self.y[i]] += 1;
        }
        counts
    }

    /// Best (feature, threshold, gain) over the candidate features, or None
    /// when no boundary splits the node.
    fn best_split(&self, idx: &[usize], features: &[usize]) -> Option<(usize, S, S)> {
        let counts = self.class_counts(idx);
        let n = idx.len();
        let parent_gini = gini::<S>(&counts, n);
        let nf = S::from_n(n);
        let mut best: Option<(usize, S, S)> = None;
        for &f in features {
            let mut vals: Vec<(S, usize)> = idx.iter().map(|&i| (self.x.get(i, f), self.y[i])).collect();
            vals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite feature values"));
            let mut left_counts = vec![0usize; self.n_classes];
            for split_at in 1..n {
                left_counts[vals[split_at - 1].1] += 1;
                if vals[split_at].0 == vals[split_at - 1].0 {
                    continue;
                }
                let right_counts: Vec<usize> = counts
                    .iter()
                    .zip(&left_counts)
                    .map(|(&c, &l)| c - l)
                    .collect();
                let nl = S::from_n(split_at);
                let nr = S::from_n(n - split_at);
                let weighted = (nl * gini::<S>(&left_counts, split_at)
                    + nr * gini::<S>(&right_counts, n - split_at))
                    / nf;
                let gain = parent_gini - weighted;
                let threshold =
                    (vals[split_at - 1].0 + vals[split_at].0) * S::from_f(0.5);
                let better = match best {
                    None => gain > S::zero(),
                    Some((_, _, bg)) => gain > bg,
                };
                if better {
                    best = Some((f, threshold, gain));
                }
            }
        }
        best
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let counts = self.class_counts(&idx);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || idx.len() < self.params.min_samples_split {
            self.nodes.push(Node::Leaf { counts });
            return self.nodes.len() - 1;
        }
        let d = self.x.cols();
        let features: Vec<usize> = match self.params.max_features {
            Some(m) if m < d => {
                let mut all: Vec<usize> = (0..d).collect();
                all.shuffle(rng);
                let mut subset = all[..m].to_vec();
                subset.sort_unstable();
                subset
            }
            _ => (0..d).collect(),
        };
        let Some((feature, threshold, gain)) = self.best_split(&idx, &features) else {
            self.nodes.push(Node::Leaf { counts });
            return self.nodes.len() - 1;
        };
        self.importances[feature] +=
            gain * S::from_n(idx.len()) / S::from_n(self.n_root);
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.x.get(i, feature) <= threshold);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { counts: Vec::new() }); // placeholder
        let left = self.build(left_idx, depth + 1, rng);
        let right = self.build(right_idx, depth + 1, rng);
        self.nodes[slot] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        slot
    }
}

impl<S: Scalar> DecisionTree<S> {
    /// Fits on the rows listed in `idx` (duplicates allowed, e.g. bootstrap).
    pub fn fit_indices(
        x: &Matrix<S>,
        y: &[usize],
        idx: Vec<usize>,
        n_classes: usize,
        params: &TreeParams,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut builder = Builder {
            x,
            y,
            n_classes,
            params,
            nodes: Vec::new(),
            importances: vec![S::zero(); x.cols()],
            n_root: idx.len().max(1),
        };
        let root = builder.build(idx, 0, rng);
        debug_assert_eq!(root, 0);
        DecisionTree {
            nodes: builder.nodes,
            n_classes,
            importances: builder.importances,
        }
    }

    pub fn fit(
        x: &Matrix<S>,
        y: &[usize],
        n_classes: usize,
        params: &TreeParams,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        Self::fit_indices(x, y, (0..x.rows()).collect(), n_classes, params, rng)
    }

    fn leaf_counts(&self, row: &[S]) -> &[usize] {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                Node::Leaf { counts } => return counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    /// Majority class of the reached leaf; ties break toward the lower class.
    pub fn predict(&self, row: &[S]) -> usize {
        let counts = self.leaf_counts(row);
        let mut best = 0usize;
        for (c, &count) in counts.iter().enumerate() {
            if count > counts[best] {
                best = c;
            }
        }
        best
    }

    /// Fraction of class-1 training samples in the reached leaf.
    pub fn positive_fraction(&self, row: &[S]) -> S {
        let counts = self.leaf_counts(row);
        let total: usize = counts.iter().sum();
        if total == 0 {
            return S::zero();
        }
        S::from_n(counts.get(1).copied().unwrap_or(0)) / S::from_n(total)
    }

    /// Per-feature mean decrease in impurity, normalized to sum to 1 when any
    /// split occurred.
    pub fn feature_importances(&self) -> Vec<S> {
        let total: S = self.importances.iter().copied().sum();
        if total > S::zero() {
            self.importances.iter().map(|&v| v / total).collect()
        } else {
            self.importances.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::derive_rng;

    #[test]
    fn separable_data_reaches_purity() {
        // Single-feature threshold at 0.5 separates the classes perfectly.
        let x = Matrix::from_rows(&[
            vec![0.1],
            vec![0.2],
            vec![0.3],
            vec![0.4],
            vec![0.6],
            vec![0.7],
            vec![0.8],
            vec![0.9],
        ]);
        let y = vec![0, 0, 0, 0, 1, 1, 1, 1];
        let mut rng = derive_rng(1, 0);
        let tree = DecisionTree::fit(&x, &y, 2, &TreeParams::default(), &mut rng);
        for i in 0..8 {
            assert_eq!(tree.predict(x.row(i)), y[i]);
        }
    }

    #[test]
    fn tie_breaking_prefers_lower_feature() {
        // Both features separate equally well; feature 0 must win.
        let x = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        ]);
        let y = vec![0, 0, 1, 1];
        let mut rng = derive_rng(1, 0);
        let tree = DecisionTree::fit(&x, &y, 2, &TreeParams::default(), &mut rng);
        let imps = tree.feature_importances();
        assert!(imps[0] > 0.99);
        assert!(imps[1] < 1e-12);
    }

    #[test]
    fn depth_limit_is_respected() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let y = vec![0, 1, 0, 1];
        let mut rng = derive_rng(1, 0);
        let tree = DecisionTree::fit(
            &x,
            &y,
            2,
            &TreeParams {
                max_depth: Some(0),
                ..TreeParams::default()
            },
            &mut rng,
        );
        // Root is forced to a leaf; majority tie breaks to class 0.
        assert_eq!(tree.predict(x.row(0)), 0);
    }

    #[test]
    fn multiclass_labels_are_recovered() {
        let x = Matrix::from_rows(&[
            vec![0.0],
            vec![0.1],
            vec![1.0],
            vec![1.1],
            vec![2.0],
            vec![2.1],
        ]);
        let y = vec![0, 0, 1, 1, 2, 2];
        let mut rng = derive_rng(3, 0);
        let tree = DecisionTree::fit(&x, &y, 3, &TreeParams::default(), &mut rng);
        for i in 0..6 {
            assert_eq!(tree.predict(x.row(i)), y[i]);
        }
    }
}
