//! Supervised term weighting for binary text classification.
//!
//! The crate bundles the pieces needed to compare credibility-adjusted
//! tf-idf against tf-idf and NBSVM features:
//!
//! * [`corpus`]: tokenization, vocabularies, dataset loaders and stratified folds
//! * [`weighting`]: token statistics and the three weighting schemes
//! * [`svm`]: an L1-loss linear SVM trained by dual coordinate descent
//! * [`eval`]: cross-validation, train/test runs and the Wilcoxon signed-ranks test

pub mod corpus;
mod error;
pub mod eval;
pub mod numfmt;
pub mod svm;
pub mod weighting;

pub use error::{Error, Result};
