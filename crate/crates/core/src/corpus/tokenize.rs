//! Lowercasing word/punctuation tokenizer with optional bigram expansion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Joins the two halves of a bigram feature. It cannot occur inside a
/// unigram because unigrams are split on whitespace and this character is
/// not alphanumeric, so it would always be peeled off as punctuation.
pub const BIGRAM_SEPARATOR: char = '\u{241F}';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NgramOrder {
    Unigram,
    Bigram,
}

impl NgramOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            NgramOrder::Unigram => 1,
            NgramOrder::Bigram => 2,
        }
    }

    /// Short suffix used in method names such as `tfidf-uni`.
    pub fn short_name(self) -> &'static str {
        match self {
            NgramOrder::Unigram => "uni",
            NgramOrder::Bigram => "bi",
        }
    }
}

impl fmt::Display for NgramOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for NgramOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "uni" | "unigram" => Ok(NgramOrder::Unigram),
            "2" | "bi" | "bigram" => Ok(NgramOrder::Bigram),
            other => Err(format!("unknown n-gram order `{other}` (expected uni|bi)")),
        }
    }
}

/// Which n-gram features a document is expanded into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub order: NgramOrder,
    /// Only meaningful for bigrams: keep the unigrams alongside them.
    pub include_unigrams: bool,
}

impl FeatureConfig {
    pub fn new(order: NgramOrder) -> Self {
        FeatureConfig {
            order,
            include_unigrams: true,
        }
    }
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig::new(NgramOrder::Unigram)
    }
}

fn is_punctuation(c: char) -> bool {
    !c.is_alphanumeric()
}

/// Splits `text` into lowercased unigram tokens.
///
/// Whitespace separates chunks. Leading and trailing non-alphanumeric
/// characters of every chunk become one-character tokens of their own;
/// interior punctuation (`don't`, `u.s`) stays attached to the word.
pub fn split_words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let lower = chunk.to_lowercase();
        let chars: Vec<char> = lower.chars().collect();
        let start = chars.iter().position(|&c| !is_punctuation(c)).unwrap_or(chars.len());
        let end = chars.iter().rposition(|&c| !is_punctuation(c)).map_or(start, |p| p + 1);
        out.extend(chars[..start].iter().map(|c| c.to_string()));
        if start < end {
            out.push(chars[start..end].iter().collect());
        }
        out.extend(chars[end..].iter().map(|c| c.to_string()));
    }
    out
}

/// Expands a unigram stream into the feature stream for `config`:
/// unigrams first (when kept), then every contiguous bigram in order.
pub fn expand_ngrams(unigrams: &[String], config: FeatureConfig) -> Vec<String> {
    match config.order {
        NgramOrder::Unigram => unigrams.to_vec(),
        NgramOrder::Bigram => {
            let n_bigrams = unigrams.len().saturating_sub(1);
            let mut out = Vec::with_capacity(unigrams.len() + n_bigrams);
            if config.include_unigrams {
                out.extend_from_slice(unigrams);
            }
            for pair in unigrams.windows(2) {
                let mut joined = String::with_capacity(pair[0].len() + pair[1].len() + 3);
                joined.push_str(&pair[0]);
                joined.push(BIGRAM_SEPARATOR);
                joined.push_str(&pair[1]);
                out.push(joined);
            }
            out
        }
    }
}

pub fn tokenize(text: &str, order: NgramOrder) -> Vec<String> {
    expand_ngrams(&split_words(text), FeatureConfig::new(order))
}
