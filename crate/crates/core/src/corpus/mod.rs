//! Document ingestion: tokenization, vocabulary construction, dataset
//! loading and cross-validation splits.

mod document;
mod folds;
mod load;
mod tokenize;
mod vocab;

pub use document::{Document, Label};
pub use folds::{fold_assignment, stratified_k_fold, CorpusSplit, DEFAULT_SEED};
pub use load::{load_dataset, with_features, DatasetFormat};
pub use tokenize::{expand_ngrams, split_words, tokenize, FeatureConfig, NgramOrder, BIGRAM_SEPARATOR};
pub use vocab::{build_vocabulary, Vocabulary, VOCAB_HEADER};
