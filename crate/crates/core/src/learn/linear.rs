//! Linear models: logistic regression and a linear SVC.

use rand::seq::SliceRandom;

use crate::matrix::Matrix;
use crate::random::ChaCha8Rng;
use crate::scalar::Scalar;

pub fn sigmoid<S: Scalar>(z: S) -> S {
    if z >= S::zero() {
        S::one() / (S::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (S::one() + e)
    }
}

fn dot<S: Scalar>(w: &[S], x: &[S]) -> S {
    w.iter().zip(x).map(|(&a, &b)| a * b).sum()
}

/// L2-regularized logistic regression fitted by full-batch gradient descent
/// with a backtracking (Armijo) line search, so the training loss never
/// increases across epochs.
#[derive(Debug, Clone)]
pub struct LogisticRegression<S> {
    pub weights: Vec<S>,
    pub bias: S,
    pub loss_history: Vec<S>,
}

pub const LR_L2: f64 = 1e-4;
pub const LR_MAX_EPOCHS: usize = 500;
pub const LR_GRAD_TOL: f64 = 1e-6;

impl<S: Scalar> LogisticRegression<S> {
    pub fn fit(x: &Matrix<S>, y: &[bool]) -> Self {
        let n = x.rows();
        let d = x.cols();
        let nf = S::from_n(n);
        let lambda = S::from_f(LR_L2);
        let mut weights = vec![S::zero(); d];
        let mut bias = S::zero();

        // log(1 + exp(-m)) without overflow.
        let softplus_neg = |m: S| {
            if m < S::from_f(-30.0) {
                -m
            } else {
                (-m).exp().ln_1p()
            }
        };
        let loss = |w: &[S], b: S| -> S {
            let data: S = (0..n)
                .map(|i| {
                    let z = dot(w, x.row(i)) + b;
                    let m = if y[i] { z } else { -z };
                    softplus_neg(m)
                })
                .sum();
            let reg: S = w.iter().map(|&v| v * v).sum();
            data / nf + lambda * reg * S::from_f(0.5)
        };
        let gradient = |w: &[S], b: S| -> (Vec<S>, S) {
            let mut gw = vec![S::zero(); d];
            let mut gb = S::zero();
            for i in 0..n {
                let z = dot(w, x.row(i)) + b;
                let s = if y[i] { S::one() } else { -S::one() };
                let coeff = -s * sigmoid(-s * z);
                for (g, &xv) in gw.iter_mut().zip(x.row(i)) {
                    *g += coeff * xv;
                }
                gb += coeff;
            }
            for (g, &wv) in gw.iter_mut().zip(w) {
                *g = *g / nf + lambda * wv;
            }
            (gw, gb / nf)
        };

        let mut loss_history = vec![loss(&weights, bias)];
        let armijo = S::from_f(1e-4);
        for _ in 0..LR_MAX_EPOCHS {
            let (gw, gb) = gradient(&weights, bias);
            let grad_norm_sq: S = gw.iter().map(|&g| g * g).sum::<S>() + gb * gb;
            if grad_norm_sq.sqrt() < S::from_f(LR_GRAD_TOL) {
                break;
            }
            let current = *loss_history.last().expect("non-empty history");
            let mut step = S::one();
            let mut accepted = false;
            while step > S::from_f(1e-20) {
                let cand_w: Vec<S> = weights
                    .iter()
                    .zip(&gw)
                    .map(|(&w, &g)| w - step * g)
                    .collect();
                let cand_b = bias - step * gb;
                if loss(&cand_w, cand_b) <= current - armijo * step * grad_norm_sq {
                    weights = cand_w;
                    bias = cand_b;
                    accepted = true;
                    break;
                }
                step = step * S::from_f(0.5);
            }
            if !accepted {
                break;
            }
            loss_history.push(loss(&weights, bias));
        }
        Self {
            weights,
            bias,
            loss_history,
        }
    }

    /// Positive-class probability.
    pub fn score(&self, row: &[S]) -> S {
        sigmoid(dot(&self.weights, row) + self.bias)
    }
}

/// Linear support vector classifier: hinge loss with L2 regularization,
/// fitted by seeded stochastic subgradient descent. The reported score maps
/// the margin through a logistic link so it lives in [0, 1].
#[derive(Debug, Clone)]
pub struct LinearSvc<S> {
    pub weights: Vec<S>,
    pub bias: S,
}

pub const SVC_L2: f64 = 1e-4;
pub const SVC_EPOCHS: usize = 200;

impl<S: Scalar> LinearSvc<S> {
    pub fn fit(x: &Matrix<S>, y: &[bool], rng: &mut ChaCha8Rng) -> Self {
        let n = x.rows();
        let d = x.cols();
        let lambda = S::from_f(SVC_L2);
        let mut weights = vec![S::zero(); d];
        let mut bias = S::zero();
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 0u64;
        for _ in 0..SVC_EPOCHS {
            order.shuffle(rng);
            for &i in &order {
                t += 1;
                // eta_t = 1 / (lambda * t + 1): starts near 1, decays slowly.
                let eta = S::one() / (lambda * S::from_f(t as f64) + S::one());
                let s = if y[i] { S::one() } else { -S::one() };
                let margin = s * (dot(&weights, x.row(i)) + bias);
                let shrink = S::one() - eta * lambda;
                for w in &mut weights {
                    *w = *w * shrink;
                }
                if margin < S::one() {
                    for (w, &xv) in weights.iter_mut().zip(x.row(i)) {
                        *w += eta * s * xv;
                    }
                    bias += eta * s;
                }
            }
        }
        Self { weights, bias }
    }

    pub fn margin(&self, row: &[S]) -> S {
        dot(&self.weights, row) + self.bias
    }

    pub fn score(&self, row: &[S]) -> S {
        sigmoid(self.margin(row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::derive_rng;

    fn separable() -> (Matrix<f64>, Vec<bool>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            rows.push(vec![-1.0 - 0.05 * i as f64, 0.3]);
            y.push(false);
            rows.push(vec![1.0 + 0.05 * i as f64, -0.3]);
            y.push(true);
        }
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn lr_loss_is_monotone_nonincreasing() {
        let (x, y) = separable();
        let model = LogisticRegression::fit(&x, &y);
        for pair in model.loss_history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15);
        }
    }

    #[test]
    fn lr_separates_separable_data() {
        let (x, y) = separable();
        let model = LogisticRegression::fit(&x, &y);
        for i in 0..x.rows() {
            assert_eq!(model.score(x.row(i)) >= 0.5, y[i]);
        }
    }

    #[test]
    fn svc_separates_separable_data() {
        let (x, y) = separable();
        let model = LinearSvc::fit(&x, &y, &mut derive_rng(1, 0));
        for i in 0..x.rows() {
            assert_eq!(model.score(x.row(i)) >= 0.5, y[i], "row {i}");
            // Margin sign agrees with the thresholded score.
            assert_eq!(model.margin(x.row(i)) >= 0.0, model.score(x.row(i)) >= 0.5);
        }
    }

    #[test]
    fn scores_live_in_unit_interval() {
        let (x, y) = separable();
        let lr = LogisticRegression::fit(&x, &y);
        let svc = LinearSvc::fit(&x, &y, &mut derive_rng(2, 0));
        for i in 0..x.rows() {
            for s in [lr.score(x.row(i)), svc.score(x.row(i))] {
                assert!((0.0..=1.0).contains(&s));
            }
        }
    }
}
