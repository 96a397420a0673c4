//! Code-style measurement and analysis for C++ source corpora.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`corpus`] ingests a contest-style directory tree of `.cpp` files plus a
//!    programmer manifest, or generates a seeded synthetic corpus for testing.
//! 2. [`lex`] and [`features`] turn each source file into a 30-dimensional
//!    vector of layout/lexical style features.
//! 3. [`cluster`] embeds and groups the feature vectors (t-SNE, Ward
//!    agglomerative clustering, k-means) and characterizes clusters with
//!    random-forest feature importances.
//! 4. [`learn`] trains eight classifier kinds (with SMOTE / random
//!    undersampling for class imbalance) under stratified k-fold
//!    cross-validation to predict "good" programmers from style alone.
//! 5. [`metrics`] provides the imbalance-aware evaluation metrics (recall,
//!    macro-F1, AUC-ROC, balanced accuracy).
//!
//! All numeric kernels are generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below fix the default precision used by the command-line
//! pipeline.

pub mod cluster;
pub mod corpus;
pub mod features;
pub mod learn;
pub mod lex;
pub mod matrix;
pub mod metrics;
pub mod random;
pub mod scalar;
pub mod standardize;

/// Default scalar type used by the end-to-end pipeline.
pub type Real = f64;
/// Row-major matrix over the default scalar.
pub type RealMatrix = matrix::Matrix<Real>;
/// Style feature vector over the default scalar.
pub type RealFeatures = features::StyleFeatures<Real>;
