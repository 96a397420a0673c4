//! Binary classification metrics for imbalanced evaluation.
//!
//! Recall, precision and F1 follow the usual confusion-matrix definitions,
//! macro-F1 averages the positive- and negative-class F1, balanced accuracy
//! averages the per-class recalls, and AUC-ROC uses the rank-based
//! Mann-Whitney statistic with midrank tie correction. Every ratio with a
//! zero denominator is defined as 0 so fold aggregation stays total.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("prediction and truth lengths differ ({truth} vs {pred})")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("empty evaluation set")]
    Empty,
    #[error("confusion matrix has no samples")]
    EmptyConfusion,
    #[error("AUC-ROC requires both classes in the evaluation set")]
    OneClassOnly,
}

/// Binary confusion matrix ("positive" = good programmer).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.true_neg += other.true_neg;
        self.false_neg += other.false_neg;
    }
}

// Wire shape: [[tn, fp], [fn, tp]].
impl Serialize for ConfusionMatrix {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&[self.true_neg, self.false_pos])?;
        seq.serialize_element(&[self.false_neg, self.true_pos])?;
        seq.end()
    }
}

/// Metric values derived from one evaluation.
///
/// `auc_roc` is `None` when the bundle was computed from a confusion matrix
/// alone; it is filled in once scores are available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBundle<S> {
    pub recall_pos: S,
    pub precision_pos: S,
    pub f1_pos: S,
    pub macro_f1: S,
    pub balanced_accuracy: S,
    pub auc_roc: Option<S>,
}

/// Exact confusion counts for paired truth/prediction vectors.
pub fn confusion(y_true: &[bool], y_pred: &[bool]) -> Result<ConfusionMatrix, MetricsError> {
    if y_true.len() != y_pred.len() {
        return Err(MetricsError::LengthMismatch {
            truth: y_true.len(),
            pred: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (true, true) => cm.true_pos += 1,
            (true, false) => cm.false_neg += 1,
            (false, true) => cm.false_pos += 1,
            (false, false) => cm.true_neg += 1,
        }
    }
    Ok(cm)
}

fn ratio<S: Scalar>(num: usize, den: usize) -> S {
    if den == 0 {
        S::zero()
    } else {
        S::from_n(num) / S::from_n(den)
    }
}

fn f1_from<S: Scalar>(precision: S, recall: S) -> S {
    let sum = precision + recall;
    if sum > S::zero() {
        S::from_f(2.0) * precision * recall / sum
    } else {
        S::zero()
    }
}

/// Threshold metrics from a confusion matrix. AUC-ROC is left unset.
pub fn classification_metrics<S: Scalar>(
    cm: &ConfusionMatrix,
) -> Result<MetricBundle<S>, MetricsError> {
    if cm.total() == 0 {
        return Err(MetricsError::EmptyConfusion);
    }
    let recall_pos = ratio(cm.true_pos, cm.true_pos + cm.false_neg);
    let precision_pos = ratio(cm.true_pos, cm.true_pos + cm.false_pos);
    let f1_pos = f1_from(precision_pos, recall_pos);
    // Negative class plays the positive role with cells swapped.
    let recall_neg = ratio::<S>(cm.true_neg, cm.true_neg + cm.false_pos);
    let precision_neg = ratio::<S>(cm.true_neg, cm.true_neg + cm.false_neg);
    let f1_neg = f1_from(precision_neg, recall_neg);
    let half = S::from_f(0.5);
    Ok(MetricBundle {
        recall_pos,
        precision_pos,
        f1_pos,
        macro_f1: (f1_pos + f1_neg) * half,
        balanced_accuracy: (recall_pos + recall_neg) * half,
        auc_roc: None,
    })
}

/// Rank-based AUC-ROC with midrank tie correction.
///
/// AUC = (R+ - n+(n+ + 1)/2) / (n+ * n-), where R+ is the sum of positive
/// midranks in the pooled score ordering.
pub fn auc_roc<S: Scalar>(y_true: &[bool], scores: &[S]) -> Result<S, MetricsError> {
    if y_true.len() != scores.len() {
        return Err(MetricsError::LengthMismatch {
            truth: y_true.len(),
            pred: scores.len(),
        });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n_pos = y_true.iter().filter(|&&t| t).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricsError::OneClassOnly);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[a]
            .partial_cmp(&scores[b])
            .expect("scores must be finite for ranking")
    });
    // Midranks: tied scores share the average of their 1-based positions.
    let mut rank_pos_sum = S::zero();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = S::from_f((i + j) as f64 / 2.0 + 1.0);
        for &idx in &order[i..=j] {
            if y_true[idx] {
                rank_pos_sum += midrank;
            }
        }
        i = j + 1;
    }
    let np = S::from_n(n_pos);
    let nn = S::from_n(n_neg);
    let expected_min = np * (np + S::one()) * S::from_f(0.5);
    Ok((rank_pos_sum - expected_min) / (np * nn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{derive_rng, unit};
    use proptest::prelude::*;
    use rand::Rng;

    // Independent recount: walks every pair category naively.
    fn naive_confusion(y_true: &[bool], y_pred: &[bool]) -> ConfusionMatrix {
        let mut cm = ConfusionMatrix::default();
        for i in 0..y_true.len() {
            if y_true[i] && y_pred[i] {
                cm.true_pos += 1;
            }
            if y_true[i] && !y_pred[i] {
                cm.false_neg += 1;
            }
            if !y_true[i] && y_pred[i] {
                cm.false_pos += 1;
            }
            if !y_true[i] && !y_pred[i] {
                cm.true_neg += 1;
            }
        }
        cm
    }

    // O(n^2) pair-counting oracle: concordant + half of ties.
    fn pairwise_auc(y: &[bool], s: &[f64]) -> f64 {
        let mut num = 0.0;
        let mut pairs = 0u64;
        for i in 0..y.len() {
            for j in 0..y.len() {
                if y[i] && !y[j] {
                    pairs += 1;
                    if s[i] > s[j] {
                        num += 1.0;
                    } else if s[i] == s[j] {
                        num += 0.5;
                    }
                }
            }
        }
        num / pairs as f64
    }

    #[test]
    fn confusion_counts_mixed_case() {
        let cm = confusion(&[true, true, false, false], &[true, false, false, true]).unwrap();
        assert_eq!(
            cm,
            ConfusionMatrix {
                true_pos: 1,
                false_neg: 1,
                true_neg: 1,
                false_pos: 1
            }
        );
    }

    #[test]
    fn all_correct_has_no_errors() {
        let cm = confusion(&[true, false, true], &[true, false, true]).unwrap();
        assert_eq!(cm.false_pos, 0);
        assert_eq!(cm.false_neg, 0);
    }

    #[test]
    fn confusion_matches_naive_recount_on_seeded_data() {
        let mut rng = derive_rng(11, 0);
        for _ in 0..50 {
            let n = rng.gen_range(1..200);
            let y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            let p: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            assert_eq!(confusion(&y, &p).unwrap(), naive_confusion(&y, &p));
        }
    }

    #[test]
    fn recall_precision_from_cells() {
        let cm = ConfusionMatrix {
            true_pos: 3,
            false_neg: 1,
            false_pos: 0,
            true_neg: 0,
        };
        let m: MetricBundle<f64> = classification_metrics(&cm).unwrap();
        assert_eq!(m.recall_pos, 0.75);
    }

    #[test]
    fn macro_f1_is_arithmetic_mean_of_class_f1() {
        // recall+ = 2/5, prec+ = 2/5 -> f1+ = 0.4; recall- = 9/12, prec- = 9/12 -> f1- = 0.75.
        let cm = ConfusionMatrix {
            true_pos: 2,
            false_neg: 3,
            false_pos: 3,
            true_neg: 9,
        };
        let m: MetricBundle<f64> = classification_metrics(&cm).unwrap();
        let f1_pos = 0.4;
        let f1_neg = 2.0 * (9.0 / 12.0) * (9.0 / 12.0) / (9.0 / 12.0 + 9.0 / 12.0);
        assert!((m.macro_f1 - (f1_pos + f1_neg) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_accuracy_averages_class_recalls() {
        // recall+ = 0.8 (4/5), recall- = 0.5 (5/10)
        let cm = ConfusionMatrix {
            true_pos: 4,
            false_neg: 1,
            true_neg: 5,
            false_pos: 5,
        };
        let m: MetricBundle<f64> = classification_metrics(&cm).unwrap();
        assert!((m.balanced_accuracy - 0.65).abs() < 1e-12);
    }

    #[test]
    fn zero_denominators_yield_zero() {
        let cm = ConfusionMatrix {
            true_pos: 0,
            false_neg: 0,
            true_neg: 5,
            false_pos: 0,
        };
        let m: MetricBundle<f64> = classification_metrics(&cm).unwrap();
        assert_eq!(m.recall_pos, 0.0);
        assert_eq!(m.precision_pos, 0.0);
        assert_eq!(m.f1_pos, 0.0);
    }

    #[test]
    fn perfect_ordering_gives_auc_one() {
        let y = [true, true, false, false];
        let s = [0.9, 0.8, 0.2, 0.1];
        assert_eq!(auc_roc(&y, &s).unwrap(), 1.0);
    }

    #[test]
    fn all_tied_scores_give_half() {
        let y = [true, false, true, false];
        let s = [0.5, 0.5, 0.5, 0.5];
        assert_eq!(auc_roc(&y, &s).unwrap(), 0.5);
    }

    #[test]
    fn auc_matches_pair_counting_oracle() {
        let mut rng = derive_rng(23, 0);
        for _ in 0..20 {
            let n = rng.gen_range(5..120);
            let mut y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
            y[0] = true;
            y[1] = false;
            // Coarse grid forces plenty of ties.
            let s: Vec<f64> = (0..n)
                .map(|_| (unit::<f64>(&mut rng) * 8.0).floor() / 8.0)
                .collect();
            let got = auc_roc(&y, &s).unwrap();
            assert!((got - pairwise_auc(&y, &s)).abs() < 1e-12);
        }
    }

    #[test]
    fn one_class_is_rejected() {
        assert_eq!(
            auc_roc(&[true, true], &[0.1, 0.2]).unwrap_err(),
            MetricsError::OneClassOnly
        );
    }

    #[test]
    fn confusion_serializes_in_wire_order() {
        let cm = ConfusionMatrix {
            true_pos: 1,
            false_pos: 2,
            true_neg: 3,
            false_neg: 4,
        };
        let json = serde_json::to_string(&cm).unwrap();
        assert_eq!(json, "[[3,2],[4,1]]");
    }

    proptest! {
        // Swapping the positive role and complementing predictions swaps the
        // class recalls and leaves macro-F1 / balanced accuracy unchanged.
        #[test]
        fn role_swap_symmetry(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..200)) {
            let y: Vec<bool> = bits.iter().map(|&(t, _)| t).collect();
            let p: Vec<bool> = bits.iter().map(|&(_, q)| q).collect();
            let yc: Vec<bool> = y.iter().map(|v| !v).collect();
            let pc: Vec<bool> = p.iter().map(|v| !v).collect();
            let a: MetricBundle<f64> = classification_metrics(&confusion(&y, &p).unwrap()).unwrap();
            let b: MetricBundle<f64> = classification_metrics(&confusion(&yc, &pc).unwrap()).unwrap();
            prop_assert!((a.macro_f1 - b.macro_f1).abs() < 1e-12);
            prop_assert!((a.balanced_accuracy - b.balanced_accuracy).abs() < 1e-12);
        }

        // AUC is invariant under strictly increasing score transforms.
        #[test]
        fn auc_invariant_under_monotone_transform(
            pairs in proptest::collection::vec((any::<bool>(), 0.0f64..1.0), 4..100)
        ) {
            let y: Vec<bool> = pairs.iter().map(|&(t, _)| t).collect();
            prop_assume!(y.iter().any(|&t| t) && y.iter().any(|&t| !t));
            let s: Vec<f64> = pairs.iter().map(|&(_, v)| v).collect();
            let t: Vec<f64> = s.iter().map(|v| (3.0 * v).exp() + 1.0).collect();
            let a = auc_roc(&y, &s).unwrap();
            let b = auc_roc(&y, &t).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        // Negating distinct scores complements the AUC.
        #[test]
        fn auc_complement_under_negation(n in 4usize..60, seed in 0u64..1000) {
            let mut rng = derive_rng(seed, 9);
            let mut y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            y[0] = true;
            y[1] = false;
            // Distinct scores: spread by index so no ties occur.
            let s: Vec<f64> = (0..n).map(|i| unit::<f64>(&mut rng) + 10.0 * i as f64).collect();
            let neg: Vec<f64> = s.iter().map(|v| -v).collect();
            let a = auc_roc(&y, &s).unwrap();
            let b = auc_roc(&y, &neg).unwrap();
            prop_assert!((a + b - 1.0).abs() < 1e-12);
        }
    }
}
