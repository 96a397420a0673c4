//! Unsupervised style analysis: t-SNE embedding, Ward agglomerative
//! clustering, k-means partitioning and random-forest cluster
//! characterization.
//!
//! Feature matrices are z-score standardized (see [`crate::standardize`])
//! before any distance computation; the CLI applies that convention for
//! every operation here.

pub mod importance;
pub mod kmeans;
pub mod tsne;
pub mod ward;

pub use importance::{cluster_feature_importance, ImportanceEntry, ImportanceReport};
pub use kmeans::{kmeans, ClusterResult};
pub use tsne::{tsne_embed, Embedding2D};
pub use ward::{adjusted_rand_index, suggest_k, ward_hac, Dendrogram, KSuggestion, Merge};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("need at least {min} points, got {n}")]
    TooFewPoints { n: usize, min: usize },
    #[error("input contains non-finite values")]
    NonFiniteInput,
    #[error("k = {k} is out of range for {n} points")]
    KTooLarge { k: usize, n: usize },
    #[error("cluster characterization needs at least 2 distinct clusters")]
    SingleCluster,
}
