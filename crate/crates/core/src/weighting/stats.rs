use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::score::raw_score;
use crate::corpus::{Document, Label, Vocabulary};
use crate::error::{Error, Result};
use crate::numfmt::format_significant;

pub const STATS_HEADER: &str = "credweight-stats v1";

/// Per-token class counts and document frequencies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCounts {
    pub c_pos: u64,
    pub c_neg: u64,
    pub df_pos: u64,
    pub df_neg: u64,
}

impl TokenCounts {
    pub fn total(&self) -> u64 {
        self.c_pos + self.c_neg
    }

    pub fn df(&self) -> u64 {
        self.df_pos + self.df_neg
    }
}

/// Statistics table indexed by vocabulary id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenStats {
    counts: Vec<TokenCounts>,
}

impl TokenStats {
    pub fn from_counts(counts: Vec<TokenCounts>) -> Self {
        TokenStats { counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&TokenCounts> {
        self.counts.get(id as usize)
    }

    pub fn counts(&self) -> &[TokenCounts] {
        &self.counts
    }

    pub fn total_tokens(&self) -> u64 {
        self.counts.iter().map(TokenCounts::total).sum()
    }

    pub fn sum_df_pos(&self) -> u64 {
        self.counts.iter().map(|c| c.df_pos).sum()
    }

    pub fn sum_df_neg(&self) -> u64 {
        self.counts.iter().map(|c| c.df_neg).sum()
    }
}

/// Corpus-level totals of a training split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_docs: u64,
    /// Occurrences of vocabulary tokens, summed over the split.
    pub total_tokens: u64,
    /// Occurrence-weighted mean of the per-token raw scores.
    pub s_bar_pop: f64,
}

/// Occurrence-weighted population mean of the raw token scores. Tokens with
/// a zero count carry no weight.
pub fn population_mean(stats: &TokenStats) -> Result<f64> {
    let total = stats.total_tokens();
    if total == 0 {
        return Err(Error::DegenerateStats("empty statistics table".into()));
    }
    let mut weighted = 0.0;
    for c in stats.counts.iter().filter(|c| c.total() > 0) {
        weighted += c.total() as f64 * raw_score(c.c_pos, c.c_neg)?;
    }
    Ok(weighted / total as f64)
}

/// Counts class occurrences and document frequencies of every vocabulary
/// token over the training documents.
pub fn build_token_stats<'a, I>(train_docs: I, vocab: &Vocabulary) -> Result<(TokenStats, CorpusStats)>
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut counts = vec![TokenCounts::default(); vocab.len()];
    let (mut n_pos, mut n_neg) = (0u64, 0u64);
    let mut ids: Vec<u32> = Vec::new();
    for doc in train_docs {
        match doc.label {
            Label::Pos => n_pos += 1,
            Label::Neg => n_neg += 1,
        }
        ids.clear();
        ids.extend(vocab.ids(&doc.tokens));
        ids.sort_unstable();
        for run in ids.chunk_by(|a, b| a == b) {
            let c = &mut counts[run[0] as usize];
            let tf = run.len() as u64;
            match doc.label {
                Label::Pos => {
                    c.c_pos += tf;
                    c.df_pos += 1;
                }
                Label::Neg => {
                    c.c_neg += tf;
                    c.df_neg += 1;
                }
            }
        }
    }
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateStats(format!(
            "training split has {n_pos} positive and {n_neg} negative documents"
        )));
    }
    let table = TokenStats { counts };
    let total_tokens = table.total_tokens();
    if total_tokens == 0 {
        return Err(Error::DegenerateStats(
            "no vocabulary token occurs in the training split".into(),
        ));
    }
    let s_bar_pop = population_mean(&table)?;
    let corpus = CorpusStats {
        n_docs: n_pos + n_neg,
        total_tokens,
        s_bar_pop,
    };
    Ok((table, corpus))
}

impl TokenStats {
    /// Writes the header, one `id c_pos c_neg df_pos df_neg` row per token
    /// and a final `N C ŝ` footer, all tab separated.
    pub fn write_to<W: Write>(&self, corpus: &CorpusStats, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{STATS_HEADER}")?;
        for (id, c) in self.counts.iter().enumerate() {
            writeln!(out, "{id}\t{}\t{}\t{}\t{}", c.c_pos, c.c_neg, c.df_pos, c.df_neg)?;
        }
        writeln!(
            out,
            "{}\t{}\t{}",
            corpus.n_docs,
            corpus.total_tokens,
            format_significant(corpus.s_bar_pop, 12)
        )?;
        out.flush()
    }

    /// Parses the serialized table. The population mean is recomputed from
    /// the rows and must agree with the printed footer value.
    pub fn read_from<R: BufRead>(input: R, source: &Path) -> Result<(TokenStats, CorpusStats)> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_path_buf(),
            line,
            message,
        };
        let mut lines = Vec::new();
        for line in input.lines() {
            lines.push(line.map_err(|e| Error::io(source, e))?);
        }
        if lines.first().map(String::as_str) != Some(STATS_HEADER) {
            return Err(parse_err(1, format!("expected header `{STATS_HEADER}`")));
        }
        if lines.len() < 2 {
            return Err(parse_err(lines.len() + 1, "missing footer row".into()));
        }
        let footer_no = lines.len();
        let mut counts = Vec::with_capacity(lines.len() - 2);
        for (idx, line) in lines[1..lines.len() - 1].iter().enumerate() {
            let line_no = idx + 2;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(parse_err(line_no, format!("expected 5 fields, got {}", fields.len())));
            }
            let mut nums = [0u64; 5];
            for (slot, f) in nums.iter_mut().zip(&fields) {
                *slot = f
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad integer `{f}`")))?;
            }
            if nums[0] != idx as u64 {
                return Err(parse_err(line_no, format!("id {} out of sequence", nums[0])));
            }
            counts.push(TokenCounts {
                c_pos: nums[1],
                c_neg: nums[2],
                df_pos: nums[3],
                df_neg: nums[4],
            });
        }
        let footer: Vec<&str> = lines[footer_no - 1].split('\t').collect();
        if footer.len() != 3 {
            return Err(parse_err(footer_no, "footer must be `N TAB C TAB ŝ`".into()));
        }
        let n_docs: u64 = footer[0]
            .parse()
            .map_err(|_| parse_err(footer_no, format!("bad N `{}`", footer[0])))?;
        let total_tokens: u64 = footer[1]
            .parse()
            .map_err(|_| parse_err(footer_no, format!("bad C `{}`", footer[1])))?;
        let printed: f64 = footer[2]
            .parse()
            .map_err(|_| parse_err(footer_no, format!("bad ŝ `{}`", footer[2])))?;

        let table = TokenStats { counts };
        if table.total_tokens() != total_tokens {
            return Err(parse_err(
                footer_no,
                format!("C = {total_tokens} but rows sum to {}", table.total_tokens()),
            ));
        }
        if let Some(c) = table.counts.iter().find(|c| c.df() > n_docs) {
            return Err(parse_err(footer_no, format!("df {} exceeds N = {n_docs}", c.df())));
        }
        let s_bar_pop = population_mean(&table)?;
        if (s_bar_pop - printed).abs() > 1e-10 {
            return Err(parse_err(
                footer_no,
                format!("ŝ = {printed} disagrees with recomputed {s_bar_pop}"),
            ));
        }
        Ok((
            table,
            CorpusStats {
                n_docs,
                total_tokens,
                s_bar_pop,
            },
        ))
    }
}
