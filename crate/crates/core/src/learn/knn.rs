//! k-nearest-neighbors classifier over standardized features.

use crate::matrix::{squared_distance, Matrix};
use crate::scalar::Scalar;

pub const KNN_K: usize = 5;

#[derive(Debug, Clone)]
pub struct KnnClassifier<S> {
    x: Matrix<S>,
    y: Vec<bool>,
    k: usize,
}

impl<S: Scalar> KnnClassifier<S> {
    pub fn fit(x: Matrix<S>, y: Vec<bool>, k: usize) -> Self {
        let k = k.clamp(1, x.rows());
        Self { x, y, k }
    }

    /// Fraction of positive labels among the k nearest training rows;
    /// distance ties break toward the lower index.
    pub fn score(&self, row: &[S]) -> S {
        let mut dists: Vec<(S, usize)> = (0..self.x.rows())
            .map(|i| (squared_distance(self.x.row(i), row), i))
            .collect();
        dists.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite distances")
                .then(a.1.cmp(&b.1))
        });
        let positives = dists
            .iter()
            .take(self.k)
            .filter(|&&(_, i)| self.y[i])
            .count();
        S::from_n(positives) / S::from_n(self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_is_neighbor_fraction() {
        let x: Matrix<f64> = Matrix::from_rows(&[vec![0.0], vec![0.1], vec![0.2], vec![5.0], vec![5.1]]);
        let y = vec![true, true, false, false, false];
        let model = KnnClassifier::fit(x, y, 3);
        // Neighbors of 0.05: rows 0, 1, 2 -> 2/3 positive.
        assert!((model.score(&[0.05]) - 2.0 / 3.0).abs() < 1e-12);
        // Neighbors of 5.05: rows 3, 4, 2 -> all negative.
        assert_eq!(model.score(&[5.05]), 0.0);
    }

    #[test]
    fn distance_ties_prefer_lower_index() {
        // Rows 0 and 1 are equidistant from the query; k = 1 must pick row 0.
        let x = Matrix::from_rows(&[vec![1.0], vec![-1.0]]);
        let y = vec![true, false];
        let model = KnnClassifier::fit(x, y, 1);
        assert_eq!(model.score(&[0.0]), 1.0);
    }
}
