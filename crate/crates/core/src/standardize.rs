//! Per-feature z-score standardization.
//!
//! Distance-based methods and the linear models require commensurable
//! features. Statistics are always fitted on the data the caller passes in
//! (for cross-validation that must be the training fold only), and constant
//! features transform to zeros instead of dividing by a zero deviation.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer<S> {
    pub means: Vec<S>,
    pub stds: Vec<S>,
}

impl<S: Scalar> Standardizer<S> {
    /// Fits population mean and standard deviation per column.
    pub fn fit(x: &Matrix<S>) -> Self {
        let n = x.rows();
        let d = x.cols();
        let nf = S::from_n(n.max(1));
        let mut means = vec![S::zero(); d];
        for row in x.iter_rows() {
            for (m, &v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m = *m / nf;
        }
        let mut vars = vec![S::zero(); d];
        for row in x.iter_rows() {
            for ((var, &m), &v) in vars.iter_mut().zip(&means).zip(row) {
                let c = v - m;
                *var += c * c;
            }
        }
        let stds = vars.into_iter().map(|v| (v / nf).sqrt()).collect();
        Self { means, stds }
    }

    pub fn transform_row(&self, row: &[S]) -> Vec<S> {
        row.iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((&v, &m), &s)| {
                if s > S::zero() {
                    (v - m) / s
                } else {
                    S::zero()
                }
            })
            .collect()
    }

    pub fn transform(&self, x: &Matrix<S>) -> Matrix<S> {
        let rows: Vec<Vec<S>> = x.iter_rows().map(|r| self.transform_row(r)).collect();
        Matrix::from_rows(&rows)
    }

    /// Fit on `x` and transform it in one step.
    pub fn fit_transform(x: &Matrix<S>) -> (Self, Matrix<S>) {
        let s = Self::fit(x);
        let t = s.transform(x);
        (s, t)
    }
}
