//! Scalar weighting primitives.

use crate::error::{Error, Result};

use super::Scaling;

/// Average per-occurrence likelihood of a correct classification for a token
/// seen `c_pos` times in the positive class and `c_neg` times in the negative
/// class: `(c_pos² + c_neg²) / (c_pos + c_neg)²`, always in `[0.5, 1]`.
pub fn raw_score(c_pos: u64, c_neg: u64) -> Result<f64> {
    let total = c_pos + c_neg;
    if total == 0 {
        return Err(Error::InvalidArgument("raw_score of a token with zero count".into()));
    }
    let (p, n, t) = (c_pos as f64, c_neg as f64, total as f64);
    Ok((p * p + n * n) / (t * t))
}

/// Shrinks the raw score toward the population mean `s_pop`; `gamma` acts as
/// a pseudo-count on the squared total. `gamma = 0` reproduces [`raw_score`].
pub fn cred_score(c_pos: u64, c_neg: u64, s_pop: f64, gamma: f64) -> Result<f64> {
    let total = c_pos + c_neg;
    if total == 0 {
        return Err(Error::InvalidArgument("cred_score of a token with zero count".into()));
    }
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
    }
    let (p, n, t) = (c_pos as f64, c_neg as f64, total as f64);
    Ok((p * p + n * n + s_pop * gamma) / (t * t + gamma))
}

/// Credibility-adjusted term frequency, `(0.5 + score) * tf`.
pub fn cred_tf(tf: f64, score: f64) -> f64 {
    (0.5 + score) * tf
}

/// Applies sublinear term-frequency scaling. `max_tf` is only consulted in
/// augmented mode and must be the per-document maximum.
pub fn sublinear_scale(v: f64, mode: Scaling, max_tf: f64) -> Result<f64> {
    match mode {
        Scaling::None => Ok(v),
        Scaling::Log => {
            if v <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "log scaling needs a positive frequency, got {v}"
                )));
            }
            Ok(v.ln() + 1.0)
        }
        Scaling::Augmented => {
            if max_tf.is_nan() || max_tf <= 0.0 || v > max_tf {
                return Err(Error::InvalidArgument(format!(
                    "augmented scaling needs 0 < v <= max_tf, got v={v}, max_tf={max_tf}"
                )));
            }
            Ok(0.5 + (0.5 + v) / max_tf)
        }
    }
}

/// `ln(n_docs / df)`.
pub fn idf(df: u64, n_docs: u64) -> Result<f64> {
    if df == 0 || df > n_docs {
        return Err(Error::InvalidArgument(format!(
            "idf needs 1 <= df <= N, got df={df}, N={n_docs}"
        )));
    }
    Ok((n_docs as f64 / df as f64).ln())
}

/// Binarized Naive-Bayes log-count ratio of one token.
///
/// `sum_df_pos`/`sum_df_neg` are the unsmoothed document-frequency totals over
/// the whole vocabulary; the `vocab_size * alpha` term completes the smoothed
/// denominators.
pub fn nbsvm_weight(
    tf: u64,
    df_pos: u64,
    df_neg: u64,
    sum_df_pos: u64,
    sum_df_neg: u64,
    alpha: f64,
    vocab_size: usize,
) -> f64 {
    if tf == 0 {
        return 0.0;
    }
    let v_alpha = vocab_size as f64 * alpha;
    let p = (df_pos as f64 + alpha) / (sum_df_pos as f64 + v_alpha);
    let q = (df_neg as f64 + alpha) / (sum_df_neg as f64 + v_alpha);
    (p / q).ln()
}
