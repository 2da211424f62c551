//! Experiment running: the fit/score pipeline, cross-validation and
//! train/test evaluation, accuracy, and the paired Wilcoxon comparison.

pub mod benchmark;
mod wilcoxon;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    build_vocabulary, stratified_k_fold, with_features, CorpusSplit, Document, FeatureConfig, Label, NgramOrder,
    Vocabulary,
};
use crate::error::{Error, Result};
use crate::svm::{self, LinearModel, TrainConfig};
use crate::weighting::{build_token_stats, CorpusStats, SparseVector, TokenStats, Weighter, WeightingConfig};

pub use wilcoxon::{
    exact_p_value, midranks, normal_p_value, wilcoxon_signed_ranks, PValueMethod, PairedComparison, EXACT_LIMIT,
};

pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_MIN_COUNT: u64 = 2;

/// Everything that determines a fitted pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub features: FeatureConfig,
    pub min_count: u64,
    pub weighting: WeightingConfig,
    pub train: TrainConfig,
}

impl PipelineConfig {
    pub fn new(order: NgramOrder, weighting: WeightingConfig) -> Self {
        PipelineConfig {
            features: FeatureConfig::new(order),
            min_count: DEFAULT_MIN_COUNT,
            weighting,
            train: TrainConfig::default(),
        }
    }

    /// Method name in the `<scheme>-<uni|bi>` form.
    pub fn method_name(&self) -> String {
        format!("{}-{}", self.weighting.scheme, self.features.order.short_name())
    }

    /// Every resolved setting as `key=value` pairs.
    pub fn describe(&self) -> String {
        format!(
            "ngram={} include_unigrams={} min_count={} {} C={} tolerance={} max_epochs={} seed={}",
            self.features.order,
            self.features.include_unigrams,
            self.min_count,
            self.weighting.describe(),
            self.train.penalty,
            self.train.tolerance,
            self.train.max_epochs,
            self.train.seed,
        )
    }
}

/// Vocabulary, statistics, weighting artifacts and model fitted on one
/// training split.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedPipeline {
    pub vocabulary: Vocabulary,
    pub stats: TokenStats,
    pub corpus_stats: CorpusStats,
    pub weighter: Weighter,
    pub model: LinearModel,
}

impl FittedPipeline {
    /// Fits on documents that already carry the feature stream for
    /// `config.features` (see [`with_features`]).
    pub fn fit(train: &[&Document], config: &PipelineConfig) -> Result<Self> {
        let vocabulary = build_vocabulary(train.iter().copied(), config.features.order, config.min_count)?;
        let (stats, corpus_stats) = build_token_stats(train.iter().copied(), &vocabulary)?;
        let weighter = Weighter::fit(&stats, &corpus_stats, config.weighting)?;
        let examples: Vec<SparseVector> = train.iter().map(|d| weighter.vectorize(d, &vocabulary)).collect();
        let labels: Vec<Label> = train.iter().map(|d| d.label).collect();
        let model = svm::train(&examples, &labels, vocabulary.len(), &config.train)?;
        Ok(FittedPipeline {
            vocabulary,
            stats,
            corpus_stats,
            weighter,
            model,
        })
    }

    pub fn vectorize(&self, doc: &Document) -> SparseVector {
        self.weighter.vectorize(doc, &self.vocabulary)
    }

    /// Predicted label and decision value.
    pub fn predict(&self, doc: &Document) -> (Label, f64) {
        let value = self.model.decision_value(&self.vectorize(doc));
        (Label::from_decision(value), value)
    }
}

/// Fraction of positions where the prediction equals the gold label.
pub fn accuracy(predictions: &[Label], gold: &[Label]) -> Result<f64> {
    if predictions.len() != gold.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::InvalidArgument("accuracy of zero predictions".into()));
    }
    let hits = predictions.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Derives an independent seed for a sub-stream (fold, benchmark cell).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    /// `None` for a fixed train/test split.
    pub fold: Option<usize>,
    pub accuracy: f64,
    pub n_train: usize,
    pub n_test: usize,
    /// Test documents without any vocabulary token.
    pub empty_test_docs: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub method: String,
    pub config: String,
    pub ngram_order: NgramOrder,
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    pub fold_count: usize,
    pub seconds: f64,
}

impl EvalReport {
    fn from_folds(config: &PipelineConfig, folds: Vec<FoldResult>, seconds: f64) -> Self {
        let mean_accuracy = folds.iter().map(|f| f.accuracy).sum::<f64>() / folds.len() as f64;
        EvalReport {
            dataset: String::new(),
            method: config.method_name(),
            config: config.describe(),
            ngram_order: config.features.order,
            fold_count: folds.len(),
            folds,
            mean_accuracy,
            seconds,
        }
    }

    pub fn with_dataset(mut self, name: impl Into<String>) -> Self {
        self.dataset = name.into();
        self
    }

    pub fn fold_accuracies(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.accuracy).collect()
    }

    /// True when both reports agree on everything except timings.
    pub fn same_results(&self, other: &EvalReport) -> bool {
        let strip = |r: &EvalReport| {
            let mut r = r.clone();
            r.seconds = 0.0;
            r.folds.iter_mut().for_each(|f| f.seconds = 0.0);
            r
        };
        strip(self) == strip(other)
    }
}

fn evaluate_split(split: &CorpusSplit<'_>, config: &PipelineConfig) -> Result<FoldResult> {
    let start = Instant::now();
    let fitted = FittedPipeline::fit(&split.train, config)?;
    let mut predictions = Vec::with_capacity(split.test.len());
    let mut empty = 0;
    for doc in &split.test {
        let x = fitted.vectorize(doc);
        if x.is_empty() {
            empty += 1;
        }
        predictions.push(fitted.model.predict(&x));
    }
    if empty > 0 {
        log::warn!(
            "{} test documents of fold {:?} have no vocabulary token",
            empty,
            split.fold_index
        );
    }
    let gold: Vec<Label> = split.test.iter().map(|d| d.label).collect();
    Ok(FoldResult {
        fold: split.fold_index,
        accuracy: accuracy(&predictions, &gold)?,
        n_train: split.train.len(),
        n_test: split.test.len(),
        empty_test_docs: empty,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Stratified k-fold cross-validation on unigram documents. Each fold
/// rebuilds vocabulary, statistics, weights and model from its training
/// part only. Fold `i` trains with seed `derive_seed(seed, i)`.
pub fn run_cv(docs: &[Document], k: usize, config: &PipelineConfig, seed: u64) -> Result<EvalReport> {
    let start = Instant::now();
    let featured = with_features(docs, config.features);
    let splits = stratified_k_fold(&featured, k, seed)?;
    let folds = splits
        .par_iter()
        .map(|split| evaluate_split(split, &fold_config(config, seed, split)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_folds(config, folds, start.elapsed().as_secs_f64()))
}

fn fold_config(config: &PipelineConfig, seed: u64, split: &CorpusSplit<'_>) -> PipelineConfig {
    let mut c = *config;
    c.train.seed = derive_seed(seed, split.fold_index.unwrap_or(0) as u64);
    c
}

/// The pipeline [`run_cv`] fits for fold `fold`, for inspection.
pub fn fit_cv_fold(
    docs: &[Document],
    k: usize,
    fold: usize,
    config: &PipelineConfig,
    seed: u64,
) -> Result<FittedPipeline> {
    if fold >= k {
        return Err(Error::InvalidArgument(format!("fold {fold} out of range for k = {k}")));
    }
    let featured = with_features(docs, config.features);
    let splits = stratified_k_fold(&featured, k, seed)?;
    let split = &splits[fold];
    FittedPipeline::fit(&split.train, &fold_config(config, seed, split))
}

/// Single train/test evaluation on unigram documents. The caller keeps the
/// two sets disjoint; every statistic comes from `train`.
pub fn run_train_test(train: &[Document], test: &[Document], config: &PipelineConfig) -> Result<EvalReport> {
    let start = Instant::now();
    let train = with_features(train, config.features);
    let test = with_features(test, config.features);
    let split = CorpusSplit::fixed(&train, &test);
    let fold = evaluate_split(&split, config)?;
    Ok(EvalReport::from_folds(
        config,
        vec![fold],
        start.elapsed().as_secs_f64(),
    ))
}
