//! Stratified k-fold cross-validation.
//!
//! Folds partition the sample indices with per-fold positive counts differing
//! by at most one. Resampling and standardization happen inside `train` on
//! the training fold only; evaluation always scores original held-out rows.

use serde::Serialize;

use super::{train, LearnError, TrainConfig};
use crate::matrix::Matrix;
use crate::metrics::{auc_roc, classification_metrics, confusion, ConfusionMatrix};
use crate::random::{derive_rng, mix_seed};
use crate::scalar::Scalar;
use rand::seq::SliceRandom;

#[derive(Debug, Clone)]
pub struct FoldPlan {
    pub k: usize,
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
}

/// Deals shuffled positives and negatives round-robin; the negative deal is
/// offset so fold sizes also differ by at most one.
pub fn stratified_kfold(y: &[bool], k: usize, seed: u64) -> Result<FoldPlan, LearnError> {
    if k < 2 {
        return Err(LearnError::InvalidFolds(k));
    }
    let mut rng = derive_rng(seed, 0);
    let mut pos: Vec<usize> = (0..y.len()).filter(|&i| y[i]).collect();
    let mut neg: Vec<usize> = (0..y.len()).filter(|&i| !y[i]).collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut folds = vec![Vec::new(); k];
    for (j, &i) in pos.iter().enumerate() {
        folds[j % k].push(i);
    }
    let offset = pos.len() % k;
    for (j, &i) in neg.iter().enumerate() {
        folds[(j + offset) % k].push(i);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(FoldPlan { k, folds, seed })
}

/// Per-fold (and mean) evaluation metrics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FoldMetrics<S> {
    pub recall: S,
    pub macro_f1: S,
    pub auc_roc: S,
    pub balanced_accuracy: S,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport<S> {
    pub model: String,
    pub folds: Vec<FoldMetrics<S>>,
    pub mean: FoldMetrics<S>,
    /// Pooled confusion matrix over all held-out folds: [[tn, fp], [fn, tp]].
    pub confusion: ConfusionMatrix,
}

/// Trains and evaluates `config` under stratified k-fold cross-validation.
pub fn cross_validate<S: Scalar>(
    config: &TrainConfig,
    x: &Matrix<S>,
    y: &[bool],
    k: usize,
    seed: u64,
) -> Result<EvalReport<S>, LearnError> {
    if k < 2 {
        return Err(LearnError::InvalidFolds(k));
    }
    let pos = y.iter().filter(|&&l| l).count();
    let neg = y.len() - pos;
    let got = pos.min(neg);
    if got < k {
        return Err(LearnError::TooFewSamplesPerClass { needed: k, got });
    }
    let plan = stratified_kfold(y, k, seed)?;
    let mut folds = Vec::with_capacity(k);
    let mut pooled = ConfusionMatrix::default();
    for (fold_idx, test_idx) in plan.folds.iter().enumerate() {
        let in_test = {
            let mut mask = vec![false; y.len()];
            for &i in test_idx {
                mask[i] = true;
            }
            mask
        };
        let train_idx: Vec<usize> = (0..y.len()).filter(|&i| !in_test[i]).collect();
        let x_train = x.select_rows(&train_idx);
        let y_train: Vec<bool> = train_idx.iter().map(|&i| y[i]).collect();
        let fold_config = TrainConfig {
            seed: mix_seed(config.seed, fold_idx as u64),
            ..config.clone()
        };
        let model = train(&fold_config, &x_train, &y_train)?;
        let y_test: Vec<bool> = test_idx.iter().map(|&i| y[i]).collect();
        let scores: Vec<S> = test_idx.iter().map(|&i| model.score(x.row(i))).collect();
        let preds: Vec<bool> = scores.iter().map(|&s| s >= S::from_f(0.5)).collect();
        let cm = confusion(&y_test, &preds)?;
        pooled.add(&cm);
        let bundle = classification_metrics::<S>(&cm)?;
        folds.push(FoldMetrics {
            recall: bundle.recall_pos,
            macro_f1: bundle.macro_f1,
            auc_roc: auc_roc(&y_test, &scores)?,
            balanced_accuracy: bundle.balanced_accuracy,
        });
    }
    let kf = S::from_n(folds.len());
    let mean = FoldMetrics {
        recall: folds.iter().map(|f| f.recall).sum::<S>() / kf,
        macro_f1: folds.iter().map(|f| f.macro_f1).sum::<S>() / kf,
        auc_roc: folds.iter().map(|f| f.auc_roc).sum::<S>() / kf,
        balanced_accuracy: folds.iter().map(|f| f.balanced_accuracy).sum::<S>() / kf,
    };
    Ok(EvalReport {
        model: config.model_kind.abbrev().to_string(),
        folds,
        mean,
        confusion: pooled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::{ModelKind, Resampler};
    use crate::random::{derive_rng, unit};

    #[test]
    fn folds_partition_all_indices() {
        let y: Vec<bool> = (0..53).map(|i| i % 7 == 0).collect();
        let plan = stratified_kfold(&y, 5, 3).unwrap();
        let mut seen: Vec<usize> = plan.folds.iter().flatten().copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..53).collect::<Vec<_>>());
    }

    #[test]
    fn stratification_is_exact_when_divisible() {
        let mut y = vec![true; 10];
        y.extend(vec![false; 90]);
        let plan = stratified_kfold(&y, 5, 11).unwrap();
        for fold in &plan.folds {
            let pos = fold.iter().filter(|&&i| y[i]).count();
            assert_eq!(pos, 2);
            assert_eq!(fold.len(), 20);
        }
    }

    #[test]
    fn positive_counts_differ_by_at_most_one() {
        let mut y = vec![true; 13];
        y.extend(vec![false; 40]);
        let plan = stratified_kfold(&y, 5, 7).unwrap();
        let counts: Vec<usize> = plan
            .folds
            .iter()
            .map(|f| f.iter().filter(|&&i| y[i]).count())
            .collect();
        let min = counts.iter().min().unwrap();
        let max = counts.iter().max().unwrap();
        assert!(max - min <= 1, "{counts:?}");
    }

    #[test]
    fn separable_data_scores_high_auc() {
        let mut rng = derive_rng(17, 0);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..60 {
            let good = i % 3 == 0;
            let center = if good { 3.0 } else { -3.0 };
            rows.push(vec![center + unit::<f64>(&mut rng), unit::<f64>(&mut rng)]);
            y.push(good);
        }
        let x = Matrix::from_rows(&rows);
        let config = TrainConfig {
            model_kind: ModelKind::LogisticRegression,
            resampler: Resampler::Smote,
            seed: 5,
        };
        let report = cross_validate(&config, &x, &y, 5, 5).unwrap();
        assert!(report.mean.auc_roc >= 0.95, "auc {}", report.mean.auc_roc);
    }

    #[test]
    fn too_few_positives_is_rejected() {
        let mut y = vec![true; 3];
        y.extend(vec![false; 40]);
        let rows: Vec<Vec<f64>> = (0..43).map(|i| vec![i as f64]).collect();
        let x = Matrix::from_rows(&rows);
        let config = TrainConfig::for_kind(ModelKind::Dummy, 0);
        assert!(matches!(
            cross_validate(&config, &x, &y, 5, 0),
            Err(LearnError::TooFewSamplesPerClass { .. })
        ));
    }

    #[test]
    fn report_serializes_to_wire_shape() {
        let mut y = vec![true; 6];
        y.extend(vec![false; 14]);
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let x = Matrix::from_rows(&rows);
        let config = TrainConfig {
            model_kind: ModelKind::Knn,
            resampler: Resampler::None,
            seed: 2,
        };
        let report = cross_validate(&config, &x, &y, 2, 2).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["model"], "KNN");
        assert!(json["folds"].as_array().unwrap().len() == 2);
        assert!(json["mean"]["auc_roc"].is_number());
        assert!(json["confusion"].as_array().unwrap().len() == 2);
    }
}
