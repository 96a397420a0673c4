//! Cluster characterization via random-forest feature importance.

use serde::Serialize;

use super::ClusterError;
use crate::learn::forest::{ForestParams, RandomForest};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct ImportanceEntry<S> {
    pub feature: String,
    pub importance: S,
}

/// Features ranked by normalized mean decrease in impurity (descending;
/// importances sum to 1).
#[derive(Debug, Clone, Serialize)]
pub struct ImportanceReport<S> {
    pub entries: Vec<ImportanceEntry<S>>,
}

/// Trains a 100-tree random forest to predict the cluster assignment from
/// the features and reports which features drive the separation.
pub fn cluster_feature_importance<S: Scalar>(
    x: &Matrix<S>,
    assignments: &[usize],
    feature_names: &[&str],
    seed: u64,
) -> Result<ImportanceReport<S>, ClusterError> {
    assert_eq!(x.rows(), assignments.len());
    assert_eq!(x.cols(), feature_names.len());
    let n_classes = assignments.iter().max().map_or(0, |&m| m + 1);
    let distinct = {
        let mut seen = vec![false; n_classes];
        for &a in assignments {
            seen[a] = true;
        }
        seen.iter().filter(|&&s| s).count()
    };
    if distinct < 2 {
        return Err(ClusterError::SingleCluster);
    }
    let forest = RandomForest::fit(x, assignments, n_classes, &ForestParams::default(), seed);
    let importances = forest.feature_importances(x.cols());
    let mut entries: Vec<ImportanceEntry<S>> = feature_names
        .iter()
        .zip(importances)
        .map(|(name, importance)| ImportanceEntry {
            feature: (*name).to_string(),
            importance,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.importance
            .partial_cmp(&a.importance)
            .expect("finite importances")
    });
    Ok(ImportanceReport { entries })
}
