//! Supervised pipeline: resampling, eight classifier kinds, stratified
//! k-fold cross-validation.
//!
//! Training always follows the same order: standardize with statistics from
//! the data being fitted (the training fold under cross-validation), apply
//! the configured resampler to the standardized training data only, then fit
//! the model. Scores are normalized to [0, 1] with `predict = score >= 0.5`
//! for every kind; for margin models that threshold coincides with the sign
//! of the margin.

pub mod boost;
pub mod cv;
pub mod dummy;
pub mod forest;
pub mod knn;
pub mod linear;
pub mod resample;
pub mod tree;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::random::{derive_rng, mix_seed};
use crate::scalar::Scalar;
use crate::standardize::Standardizer;

use boost::RusAdaBoost;
use dummy::DummyClassifier;
use forest::{ForestParams, RandomForest};
use knn::{KnnClassifier, KNN_K};
use linear::{LinearSvc, LogisticRegression};
use tree::{DecisionTree, TreeParams};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("minority class has {0} samples; SMOTE needs at least 2")]
    MinorityTooSmall(usize),
    #[error("resampling requires both classes to be non-empty")]
    EmptyClass,
    #[error("training data contains a single class")]
    SingleClassTraining,
    #[error("training data contains non-finite values")]
    NonFiniteInput,
    #[error("cross-validation needs at least {needed} samples per class, got {got}")]
    TooFewSamplesPerClass { needed: usize, got: usize },
    #[error("fold count must be at least 2, got {0}")]
    InvalidFolds(usize),
    #[error(transparent)]
    Metrics(#[from] crate::metrics::MetricsError),
}

/// The eight classifier kinds of the prediction study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Dummy,
    LogisticRegression,
    LinearSvc,
    Knn,
    DecisionTree,
    RandomForest,
    BalancedRandomForest,
    RusAdaBoost,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Dummy,
        ModelKind::LogisticRegression,
        ModelKind::LinearSvc,
        ModelKind::Knn,
        ModelKind::DecisionTree,
        ModelKind::RandomForest,
        ModelKind::BalancedRandomForest,
        ModelKind::RusAdaBoost,
    ];

    /// Report abbreviation.
    pub fn abbrev(self) -> &'static str {
        match self {
            ModelKind::Dummy => "Dummy",
            ModelKind::LogisticRegression => "LR",
            ModelKind::LinearSvc => "SVC",
            ModelKind::Knn => "KNN",
            ModelKind::DecisionTree => "DT",
            ModelKind::RandomForest => "RF",
            ModelKind::BalancedRandomForest => "BRF",
            ModelKind::RusAdaBoost => "RUSAda",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        match s.to_ascii_lowercase().as_str() {
            "dummy" => Some(ModelKind::Dummy),
            "lr" | "logisticregression" | "logistic-regression" => {
                Some(ModelKind::LogisticRegression)
            }
            "svc" | "linearsvc" | "linear-svc" => Some(ModelKind::LinearSvc),
            "knn" => Some(ModelKind::Knn),
            "dt" | "decisiontree" | "decision-tree" => Some(ModelKind::DecisionTree),
            "rf" | "randomforest" | "random-forest" => Some(ModelKind::RandomForest),
            "brf" | "balancedrandomforest" | "balanced-random-forest" => {
                Some(ModelKind::BalancedRandomForest)
            }
            "rusada" | "rusadaboost" | "rus-adaboost" => Some(ModelKind::RusAdaBoost),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resampler {
    None,
    Smote,
    RandomUnderSample,
}

pub const SMOTE_K_NEIGHBORS: usize = 5;

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub model_kind: ModelKind,
    pub resampler: Resampler,
    pub seed: u64,
}

impl TrainConfig {
    /// Default pipeline per kind: the ensembles with internal balancing run
    /// on the raw class ratio, everything else (the baseline included) sees
    /// SMOTE-balanced training data.
    pub fn for_kind(model_kind: ModelKind, seed: u64) -> Self {
        let resampler = match model_kind {
            ModelKind::BalancedRandomForest | ModelKind::RusAdaBoost => Resampler::None,
            _ => Resampler::Smote,
        };
        Self {
            model_kind,
            resampler,
            seed,
        }
    }
}

const STREAM_RESAMPLE: u64 = 0;

#[derive(Debug, Clone)]
enum Fitted<S> {
    Dummy(DummyClassifier<S>),
    Lr(LogisticRegression<S>),
    Svc(LinearSvc<S>),
    Knn(KnnClassifier<S>),
    Tree(DecisionTree<S>),
    Forest(RandomForest<S>),
    Boost(RusAdaBoost<S>),
}

/// A fitted model plus the standardization statistics of its training fold.
#[derive(Debug, Clone)]
pub struct TrainedModel<S> {
    pub kind: ModelKind,
    pub standardizer: Standardizer<S>,
    inner: Fitted<S>,
}

impl<S: Scalar> TrainedModel<S> {
    /// Score in [0, 1]; higher means more likely good.
    pub fn score(&self, raw_row: &[S]) -> S {
        let row = self.standardizer.transform_row(raw_row);
        match &self.inner {
            Fitted::Dummy(m) => m.score(&row),
            Fitted::Lr(m) => m.score(&row),
            Fitted::Svc(m) => m.score(&row),
            Fitted::Knn(m) => m.score(&row),
            Fitted::Tree(m) => m.positive_fraction(&row),
            Fitted::Forest(m) => m.positive_vote_fraction(&row),
            Fitted::Boost(m) => m.score(&row),
        }
    }

    pub fn predict(&self, raw_row: &[S]) -> bool {
        self.score(raw_row) >= S::from_f(0.5)
    }

    /// Introspection hook for the forest kinds.
    pub fn forest(&self) -> Option<&RandomForest<S>> {
        match &self.inner {
            Fitted::Forest(f) => Some(f),
            _ => None,
        }
    }

    /// Introspection hook for logistic regression.
    pub fn logistic(&self) -> Option<&LogisticRegression<S>> {
        match &self.inner {
            Fitted::Lr(m) => Some(m),
            _ => None,
        }
    }

    /// Introspection hook for the boosting kind.
    pub fn boost(&self) -> Option<&RusAdaBoost<S>> {
        match &self.inner {
            Fitted::Boost(m) => Some(m),
            _ => None,
        }
    }
}

/// Standardizes, resamples and fits one model.
pub fn train<S: Scalar>(
    config: &TrainConfig,
    x: &Matrix<S>,
    y: &[bool],
) -> Result<TrainedModel<S>, LearnError> {
    if !x.is_finite() {
        return Err(LearnError::NonFiniteInput);
    }
    let pos = y.iter().filter(|&&l| l).count();
    if pos == 0 || pos == y.len() {
        return Err(LearnError::SingleClassTraining);
    }
    let (standardizer, xs) = Standardizer::fit_transform(x);
    let mut resample_rng = derive_rng(config.seed, STREAM_RESAMPLE);
    let (xr, yr) = match config.resampler {
        Resampler::None => (xs, y.to_vec()),
        Resampler::Smote => resample::smote(&xs, y, SMOTE_K_NEIGHBORS, &mut resample_rng)?,
        Resampler::RandomUnderSample => resample::random_undersample(&xs, y, &mut resample_rng)?,
    };
    let labels: Vec<usize> = yr.iter().map(|&l| usize::from(l)).collect();
    let inner = match config.model_kind {
        ModelKind::Dummy => Fitted::Dummy(DummyClassifier::fit(&yr, config.seed)),
        ModelKind::LogisticRegression => Fitted::Lr(LogisticRegression::fit(&xr, &yr)),
        ModelKind::LinearSvc => {
            let mut rng = derive_rng(config.seed, 1);
            Fitted::Svc(LinearSvc::fit(&xr, &yr, &mut rng))
        }
        ModelKind::Knn => Fitted::Knn(KnnClassifier::fit(xr, yr, KNN_K)),
        ModelKind::DecisionTree => {
            let mut rng = derive_rng(config.seed, 2);
            Fitted::Tree(DecisionTree::fit(
                &xr,
                &labels,
                2,
                &TreeParams::default(),
                &mut rng,
            ))
        }
        ModelKind::RandomForest => Fitted::Forest(RandomForest::fit(
            &xr,
            &labels,
            2,
            &ForestParams::default(),
            mix_seed(config.seed, 3),
        )),
        ModelKind::BalancedRandomForest => Fitted::Forest(RandomForest::fit(
            &xr,
            &labels,
            2,
            &ForestParams {
                n_trees: 100,
                balanced: true,
            },
            mix_seed(config.seed, 4),
        )),
        ModelKind::RusAdaBoost => {
            Fitted::Boost(RusAdaBoost::fit(&xr, &yr, mix_seed(config.seed, 5)))
        }
    };
    Ok(TrainedModel {
        kind: config.model_kind,
        standardizer,
        inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threshold_data() -> (Matrix<f64>, Vec<bool>) {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, 0.5]).collect();
        let y: Vec<bool> = (0..8).map(|i| i >= 4).collect();
        (Matrix::from_rows(&rows), y)
    }

    #[test]
    fn decision_tree_reaches_training_accuracy_one() {
        let (x, y) = threshold_data();
        let config = TrainConfig {
            model_kind: ModelKind::DecisionTree,
            resampler: Resampler::None,
            seed: 1,
        };
        let model = train(&config, &x, &y).unwrap();
        for i in 0..x.rows() {
            assert_eq!(model.predict(x.row(i)), y[i]);
        }
    }

    #[test]
    fn brf_bootstraps_are_balanced_through_train() {
        let mut rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
        rows.extend((0..10).map(|i| vec![100.0 + i as f64]));
        let x = Matrix::from_rows(&rows);
        let mut y = vec![false; 40];
        y.extend(vec![true; 10]);
        let config = TrainConfig::for_kind(ModelKind::BalancedRandomForest, 9);
        assert_eq!(config.resampler, Resampler::None);
        let model = train(&config, &x, &y).unwrap();
        for counts in &model.forest().unwrap().bootstrap_class_counts {
            assert_eq!(counts[0], counts[1]);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        let config = TrainConfig::for_kind(ModelKind::Dummy, 0);
        assert!(matches!(
            train(&config, &x, &[true, true]),
            Err(LearnError::SingleClassTraining)
        ));
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let x = Matrix::from_rows(&[vec![f64::NAN], vec![1.0]]);
        let config = TrainConfig::for_kind(ModelKind::Knn, 0);
        assert!(matches!(
            train(&config, &x, &[true, false]),
            Err(LearnError::NonFiniteInput)
        ));
    }

    #[test]
    fn predictions_are_seed_deterministic() {
        let (x, y) = threshold_data();
        for kind in ModelKind::ALL {
            let config = TrainConfig {
                model_kind: kind,
                resampler: Resampler::None,
                seed: 21,
            };
            let a = train(&config, &x, &y).unwrap();
            let b = train(&config, &x, &y).unwrap();
            for i in 0..x.rows() {
                assert_eq!(a.score(x.row(i)), b.score(x.row(i)), "{kind:?}");
            }
        }
    }

    #[test]
    fn model_names_parse_back() {
        for kind in ModelKind::ALL {
            assert_eq!(ModelKind::parse(kind.abbrev()), Some(kind));
        }
        assert_eq!(ModelKind::parse("nonsense"), None);
    }
}
