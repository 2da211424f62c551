use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use super::document::Document;
use super::tokenize::NgramOrder;
use crate::error::{Error, Result};

pub const VOCAB_HEADER: &str = "credweight-vocab v1";

/// Token-string to dense id mapping built from a training split.
///
/// Ids follow the lexicographic order of the token strings, so two
/// vocabularies built from the same multiset of documents are identical
/// regardless of document order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    ngram_order: NgramOrder,
    min_count: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from tokens that are already sorted and unique.
    fn from_sorted(tokens: Vec<String>, ngram_order: NgramOrder, min_count: u64) -> Self {
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Vocabulary {
            tokens,
            index,
            ngram_order,
            min_count,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn ngram_order(&self) -> NgramOrder {
        self.ngram_order
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    /// Maps a token stream to vocabulary ids, dropping unknown tokens.
    pub fn ids<'a>(&'a self, tokens: &'a [String]) -> impl Iterator<Item = u32> + 'a {
        tokens.iter().filter_map(|t| self.id(t))
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{VOCAB_HEADER}")?;
        for (id, token) in self.tokens.iter().enumerate() {
            writeln!(out, "{token}\t{id}")?;
        }
        out.flush()
    }

    /// Reads the serialized form. The file does not carry the n-gram order or
    /// count threshold, so the caller supplies them.
    pub fn read_from<R: BufRead>(input: R, source: &Path, ngram_order: NgramOrder, min_count: u64) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_path_buf(),
            line,
            message,
        };
        let mut lines = input.lines();
        match lines.next() {
            Some(Ok(h)) if h == VOCAB_HEADER => {}
            Some(Err(e)) => return Err(Error::io(source, e)),
            _ => return Err(parse_err(1, format!("expected header `{VOCAB_HEADER}`"))),
        }
        let mut tokens = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line.map_err(|e| Error::io(source, e))?;
            let (token, id) = line
                .rsplit_once('\t')
                .ok_or_else(|| parse_err(line_no, "expected `token TAB id`".into()))?;
            let id: usize = id.parse().map_err(|_| parse_err(line_no, format!("bad id `{id}`")))?;
            if id != tokens.len() {
                return Err(parse_err(line_no, format!("id {id} out of sequence")));
            }
            if tokens.last().is_some_and(|prev: &String| prev.as_str() >= token) {
                return Err(parse_err(line_no, "tokens not in sorted order".into()));
            }
            tokens.push(token.to_string());
        }
        Ok(Vocabulary::from_sorted(tokens, ngram_order, min_count))
    }
}

/// Keeps every feature token whose total count over `train_docs` is at least
/// `min_count`. The documents are expected to already carry the feature
/// stream for `ngram_order`; the threshold applies to every n-gram type alike.
pub fn build_vocabulary<'a, I>(train_docs: I, ngram_order: NgramOrder, min_count: u64) -> Result<Vocabulary>
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut n_docs = 0usize;
    for doc in train_docs {
        n_docs += 1;
        for t in &doc.tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    if n_docs == 0 {
        return Err(Error::InvalidArgument(
            "cannot build a vocabulary from zero documents".into(),
        ));
    }
    let mut kept: Vec<String> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .map(|(t, _)| t.to_string())
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    kept.sort_unstable();
    Ok(Vocabulary::from_sorted(kept, ngram_order, min_count))
}
