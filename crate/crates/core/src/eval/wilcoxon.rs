//! Two-sided Wilcoxon signed-ranks test for paired accuracies.
//!
//! Zero differences are dropped, tied absolute differences share their
//! midrank. Up to [`EXACT_LIMIT`] nonzero pairs the p-value comes from the
//! exact null distribution of the positive rank sum; above that a normal
//! approximation with tie and continuity correction is used.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const EXACT_LIMIT: usize = 20;

/// Relative tolerance under which two absolute differences count as tied
/// (and a difference counts as zero). Accuracies printed with one decimal
/// yield differences such as `0.4000000000000057` and `0.3999999999999915`.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    Exact,
    NormalApprox,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub pairs: Vec<(f64, f64)>,
    /// Pairs left after dropping zero differences.
    pub n_nonzero: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(W+, W-)`.
    pub statistic: f64,
    pub p_value: f64,
    pub method: PValueMethod,
}

/// Midranks of `values` (1-based), ties within [`TIE_TOLERANCE`].
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && tied(values[order[end - 1]], values[order[end]]) {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

fn is_zero_difference(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

/// `min(1, 2 P(T <= w))` where `T` is the positive rank sum under random
/// signs. Midranks are multiples of ½, so the distribution is tabulated
/// exactly over doubled ranks.
pub fn exact_p_value(ranks: &[f64], w: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let threshold = (2.0 * w).round() as usize;
    let tail: u64 = counts.iter().take(threshold + 1).sum();
    let p = (2 * tail) as f64 / (1u64 << ranks.len()) as f64;
    p.min(1.0)
}

/// Normal approximation with tie correction and a ½ continuity correction.
pub fn normal_p_value(ranks: &[f64], w: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tie_term: f64 = sorted
        .chunk_by(|a, b| a == b)
        .map(|g| {
            let t = g.len() as f64;
            t * t * t - t
        })
        .sum();
    let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if variance <= 0.0 {
        return 1.0;
    }
    let z = ((w - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}

/// Compares method A against method B over paired scores `(a, b)`.
pub fn wilcoxon_signed_ranks(pairs: &[(f64, f64)]) -> Result<PairedComparison> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no pairs to compare".into()));
    }
    if pairs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::InvalidArgument("non-finite score in pairs".into()));
    }
    let diffs: Vec<f64> = pairs
        .iter()
        .filter(|(a, b)| !is_zero_difference(*a, *b))
        .map(|(a, b)| a - b)
        .collect();
    if diffs.is_empty() {
        return Err(Error::AllDifferencesZero);
    }
    if diffs.len() < 5 {
        log::debug!("Wilcoxon test with only {} nonzero pairs", diffs.len());
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    // fold from +0.0: an empty f64 sum is -0.0
    let rank_sum = |positive: bool| {
        diffs
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| (**d > 0.0) == positive)
            .fold(0.0, |acc, (_, r)| acc + r)
    };
    let (w_plus, w_minus) = (rank_sum(true), rank_sum(false));
    let statistic = w_plus.min(w_minus);
    let (p_value, method) = if ranks.len() <= EXACT_LIMIT {
        (exact_p_value(&ranks, statistic), PValueMethod::Exact)
    } else {
        (normal_p_value(&ranks, statistic), PValueMethod::NormalApprox)
    };
    Ok(PairedComparison {
        pairs: pairs.to_vec(),
        n_nonzero: ranks.len(),
        w_plus,
        w_minus,
        statistic,
        p_value,
        method,
    })
}
