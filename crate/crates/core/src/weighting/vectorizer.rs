use super::score::{cred_score, cred_tf, idf, nbsvm_weight, sublinear_scale};
use super::sparse::{l2_normalize, SparseVector};
use super::stats::{CorpusStats, TokenStats};
use super::{Scaling, Scheme, WeightingConfig};
use crate::corpus::{Document, Vocabulary};
use crate::error::{Error, Result};

/// Per-token weighting artifacts fitted on one training split.
///
/// For the tf-idf family `token_factor` holds the idf of every token and
/// `tf_multiplier` the credibility factor `0.5 + s̄` (all ones for plain
/// tf-idf). For nbsvm `token_factor` holds the log-count ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighter {
    config: WeightingConfig,
    token_factor: Vec<f64>,
    tf_multiplier: Vec<f64>,
}

impl Weighter {
    pub fn fit(stats: &TokenStats, corpus: &CorpusStats, config: WeightingConfig) -> Result<Self> {
        config.validate()?;
        if stats.is_empty() {
            return Err(Error::DegenerateStats("empty statistics table".into()));
        }
        let counts = stats.counts();
        let (token_factor, tf_multiplier) = match config.scheme {
            Scheme::Tfidf | Scheme::CredTfidf => {
                let idfs = counts
                    .iter()
                    .map(|c| idf(c.df(), corpus.n_docs))
                    .collect::<Result<Vec<_>>>()?;
                let multipliers = if config.scheme == Scheme::CredTfidf {
                    counts
                        .iter()
                        .map(|c| cred_score(c.c_pos, c.c_neg, corpus.s_bar_pop, config.gamma).map(|s| cred_tf(1.0, s)))
                        .collect::<Result<Vec<_>>>()?
                } else {
                    vec![1.0; counts.len()]
                };
                (idfs, multipliers)
            }
            Scheme::Nbsvm => {
                let (sum_pos, sum_neg) = (stats.sum_df_pos(), stats.sum_df_neg());
                let ratios = counts
                    .iter()
                    .map(|c| nbsvm_weight(1, c.df_pos, c.df_neg, sum_pos, sum_neg, config.alpha, counts.len()))
                    .collect();
                (ratios, vec![1.0; counts.len()])
            }
        };
        log::debug!("fitted weighter: {}", config.describe());
        Ok(Weighter {
            config,
            token_factor,
            tf_multiplier,
        })
    }

    pub fn config(&self) -> &WeightingConfig {
        &self.config
    }

    /// Number of features, equal to the vocabulary size.
    pub fn dimension(&self) -> usize {
        self.token_factor.len()
    }

    /// Credibility multiplier `0.5 + s̄` of a token (1.0 outside cred-tfidf).
    pub fn tf_multiplier(&self, id: u32) -> Option<f64> {
        self.tf_multiplier.get(id as usize).copied()
    }

    /// idf (tf-idf family) or log-count ratio (nbsvm) of a token.
    pub fn token_factor(&self, id: u32) -> Option<f64> {
        self.token_factor.get(id as usize).copied()
    }

    pub fn vectorize(&self, doc: &Document, vocab: &Vocabulary) -> SparseVector {
        self.vectorize_tokens(&doc.tokens, vocab)
    }

    /// Out-of-vocabulary tokens are dropped. A document with no vocabulary
    /// token maps to the empty vector.
    pub fn vectorize_tokens(&self, tokens: &[String], vocab: &Vocabulary) -> SparseVector {
        let mut ids: Vec<u32> = vocab.ids(tokens).collect();
        ids.sort_unstable();
        let term_counts: Vec<(u32, u64)> = ids
            .chunk_by(|a, b| a == b)
            .map(|run| (run[0], run.len() as u64))
            .collect();
        self.vectorize_counts(&term_counts)
            .expect("vocabulary and weighter were fitted together")
    }

    /// Weighs `(id, tf)` pairs sorted by id with `tf >= 1`.
    pub fn vectorize_counts(&self, term_counts: &[(u32, u64)]) -> Result<SparseVector> {
        if let Some(&(id, _)) = term_counts.iter().find(|&&(id, _)| id as usize >= self.dimension()) {
            return Err(Error::InvalidArgument(format!(
                "feature id {id} outside dimension {}",
                self.dimension()
            )));
        }
        let raw = match self.config.scheme {
            Scheme::Nbsvm => term_counts
                .iter()
                .map(|&(id, tf)| (id, if tf > 0 { self.token_factor[id as usize] } else { 0.0 }))
                .collect(),
            Scheme::Tfidf | Scheme::CredTfidf => {
                let adjusted: Vec<f64> = term_counts
                    .iter()
                    .map(|&(id, tf)| self.tf_multiplier[id as usize] * tf as f64)
                    .collect();
                let max_tf = adjusted.iter().copied().fold(0.0, f64::max);
                let mut out = Vec::with_capacity(term_counts.len());
                for (&(id, _), &tf) in term_counts.iter().zip(&adjusted) {
                    let scaled = match self.config.scaling {
                        Scaling::None => tf,
                        mode => sublinear_scale(tf, mode, max_tf)?,
                    };
                    out.push((id, scaled * self.token_factor[id as usize]));
                }
                out
            }
        };
        let v = SparseVector::from_sorted_unchecked(raw);
        Ok(if self.config.normalize { l2_normalize(&v) } else { v })
    }
}
