//! Term weighting: token statistics from a training split and the mapping
//! of documents to sparse weighted feature vectors.
//!
//! Three schemes are supported:
//!
//! * `tfidf`: `scale(tf) * ln(N / df)`
//! * `cred-tfidf`: `scale((0.5 + s̄) * tf) * ln(N / df)`, where `s̄` is the
//!   token's class-concentration score shrunk toward the corpus mean
//! * `nbsvm`: binarized Naive-Bayes log-count ratios
//!
//! l2 normalization is applied last when enabled.

mod score;
mod sparse;
mod stats;
mod vectorizer;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use score::{cred_score, cred_tf, idf, nbsvm_weight, raw_score, sublinear_scale};
pub use sparse::{l2_normalize, SparseVector};
pub use stats::{build_token_stats, population_mean, CorpusStats, TokenCounts, TokenStats, STATS_HEADER};
pub use vectorizer::Weighter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Tfidf,
    CredTfidf,
    Nbsvm,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Tfidf => "tfidf",
            Scheme::CredTfidf => "cred-tfidf",
            Scheme::Nbsvm => "nbsvm",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tfidf" | "tf-idf" => Ok(Scheme::Tfidf),
            "cred-tfidf" | "cred-tf-idf" | "credtfidf" => Ok(Scheme::CredTfidf),
            "nbsvm" => Ok(Scheme::Nbsvm),
            other => Err(format!("unknown scheme `{other}` (expected tfidf|cred-tfidf|nbsvm)")),
        }
    }
}

/// Sublinear term-frequency scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    None,
    /// `ln(tf) + 1`
    Log,
    /// `0.5 + (0.5 + tf) / max_tf`, `max_tf` taken within the document
    Augmented,
}

impl Scaling {
    pub fn name(self) -> &'static str {
        match self {
            Scaling::None => "none",
            Scaling::Log => "log",
            Scaling::Augmented => "augmented",
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scaling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "linear" => Ok(Scaling::None),
            "log" => Ok(Scaling::Log),
            "augmented" | "aug" => Ok(Scaling::Augmented),
            other => Err(format!("unknown scaling `{other}` (expected none|log|augmented)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightingConfig {
    pub scheme: Scheme,
    /// Credibility smoothing, cred-tfidf only.
    pub gamma: f64,
    /// Log-count ratio smoothing, nbsvm only.
    pub alpha: f64,
    /// Ignored by nbsvm, whose features are binary.
    pub scaling: Scaling,
    pub normalize: bool,
}

impl WeightingConfig {
    /// Defaults for a scheme: log scaling with l2 normalization for the
    /// tf-idf family, plain binary log-count ratios for nbsvm.
    pub fn for_scheme(scheme: Scheme) -> Self {
        WeightingConfig {
            scheme,
            gamma: 1.0,
            alpha: 1.0,
            scaling: Scaling::Log,
            normalize: scheme != Scheme::Nbsvm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        if self.alpha <= 0.0 || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha must be finite and > 0, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Human-readable summary of every setting that affects the vectors.
    pub fn describe(&self) -> String {
        match self.scheme {
            Scheme::Tfidf => format!("scheme=tfidf scaling={} normalize={}", self.scaling, self.normalize),
            Scheme::CredTfidf => format!(
                "scheme=cred-tfidf gamma={} scaling={} normalize={}",
                self.gamma, self.scaling, self.normalize
            ),
            Scheme::Nbsvm => format!("scheme=nbsvm alpha={} normalize={}", self.alpha, self.normalize),
        }
    }
}

impl Default for WeightingConfig {
    fn default() -> Self {
        WeightingConfig::for_scheme(Scheme::CredTfidf)
    }
}
