//! L2-regularized L1-loss (hinge) linear SVM trained by dual coordinate
//! descent.
//!
//! The bias is handled by appending a constant feature of value 1 to every
//! example and regularizing it together with the weights, so the solver
//! minimizes
//!
//! ```text
//! P(w, b) = ½ (‖w‖² + b²) + C Σ_d max(0, 1 − y_d (wᵀx_d + b))
//! ```
//!
//! through its box-constrained dual
//!
//! ```text
//! D(α) = Σ_d α_d − ½ ‖Σ_d α_d y_d x̃_d‖²,   0 ≤ α_d ≤ C.
//! ```
//!
//! Each epoch visits the active coordinates in a seeded random order and
//! maximizes D exactly along each of them. Coordinates stuck at a bound are
//! shrunk out of the active set, and the run stops once the projected
//! gradient spread falls below the tolerance on the full set.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::numfmt::format_scientific;
use crate::weighting::SparseVector;

pub const MODEL_HEADER: &str = "credweight-model v1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Hinge-loss penalty `C`.
    pub penalty: f64,
    /// Stop once the projected-gradient spread is below this value.
    pub tolerance: f64,
    pub max_epochs: usize,
    /// Seed of the per-epoch coordinate permutation.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            penalty: 1.0,
            tolerance: 1e-4,
            max_epochs: 1000,
            seed: 42,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.penalty <= 0.0 || !self.penalty.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "penalty must be finite and > 0, got {}",
                self.penalty
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidArgument("max_epochs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Trained weights `w`, bias `b` and the primal objective at `(w, b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub objective: f64,
}

/// Diagnostics of a training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub model: LinearModel,
    /// Final dual variables, one per example.
    pub alpha: Vec<f64>,
    pub dual_objective: f64,
    /// Dual objective at the end of every epoch.
    pub dual_trace: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
}

impl TrainReport {
    pub fn duality_gap(&self) -> f64 {
        self.model.objective - self.dual_objective
    }
}

impl LinearModel {
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// `wᵀx + b`. Feature ids beyond the model dimension contribute nothing.
    pub fn decision_value(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    /// `sign(wᵀx + b)` with ties going to the positive class.
    pub fn predict(&self, x: &SparseVector) -> Label {
        Label::from_decision(self.decision_value(x))
    }

    /// Writes the header, a `bias` line and one `id TAB weight` row per
    /// nonzero weight, using 17 significant digits.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{MODEL_HEADER}")?;
        writeln!(out, "bias\t{}", format_scientific(self.bias, 17))?;
        for (id, &w) in self.weights.iter().enumerate() {
            if w != 0.0 {
                writeln!(out, "{id}\t{}", format_scientific(w, 17))?;
            }
        }
        out.flush()
    }

    /// The file stores only nonzero weights, so the caller supplies the
    /// dimension (the vocabulary size). The objective is not stored and reads
    /// back as NaN.
    pub fn read_from<R: BufRead>(input: R, source: &Path, dimension: usize) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_path_buf(),
            line,
            message,
        };
        let mut lines = input.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(l))) => Ok((i + 1, l)),
                Some((_, Err(e))) => Err(Error::io(source, e)),
                None => Err(parse_err(0, format!("missing {what}"))),
            }
        };
        let (_, header) = next("header")?;
        if header != MODEL_HEADER {
            return Err(parse_err(1, format!("expected header `{MODEL_HEADER}`")));
        }
        let (n, bias_line) = next("bias line")?;
        let bias = match bias_line.split_once('\t') {
            Some(("bias", v)) => v.parse::<f64>().map_err(|_| parse_err(n, format!("bad bias `{v}`")))?,
            _ => return Err(parse_err(n, "expected `bias TAB value`".into())),
        };
        let mut weights = vec![0.0; dimension];
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io(source, e))?;
            let (id, w) = line
                .split_once('\t')
                .ok_or_else(|| parse_err(line_no, "expected `id TAB weight`".into()))?;
            let id: usize = id.parse().map_err(|_| parse_err(line_no, format!("bad id `{id}`")))?;
            let w: f64 = w.parse().map_err(|_| parse_err(line_no, format!("bad weight `{w}`")))?;
            *weights
                .get_mut(id)
                .ok_or_else(|| parse_err(line_no, format!("id {id} >= dimension {dimension}")))? = w;
        }
        Ok(LinearModel {
            weights,
            bias,
            objective: f64::NAN,
        })
    }
}

/// Primal objective `½(‖w‖² + b²) + C Σ max(0, 1 − y(wᵀx + b))`.
pub fn primal_objective(weights: &[f64], bias: f64, examples: &[SparseVector], labels: &[Label], penalty: f64) -> f64 {
    let reg = 0.5 * (weights.iter().map(|w| w * w).sum::<f64>() + bias * bias);
    let loss: f64 = examples
        .iter()
        .zip(labels)
        .map(|(x, y)| (1.0 - y.sign() * (x.dot_dense(weights) + bias)).max(0.0))
        .sum();
    reg + penalty * loss
}

fn dual_objective(alpha: &[f64], weights: &[f64], bias: f64) -> f64 {
    let sum_alpha: f64 = alpha.iter().sum();
    sum_alpha - 0.5 * (weights.iter().map(|w| w * w).sum::<f64>() + bias * bias)
}

fn check_inputs(examples: &[SparseVector], labels: &[Label], dimension: usize) -> Result<()> {
    if examples.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: examples.len(),
            right: labels.len(),
        });
    }
    if dimension == 0 {
        return Err(Error::ZeroDimension);
    }
    let has_pos = labels.contains(&Label::Pos);
    let has_neg = labels.contains(&Label::Neg);
    if !has_pos || !has_neg {
        return Err(Error::SingleClass);
    }
    if let Some(x) = examples.iter().find(|x| x.dimension() > dimension) {
        return Err(Error::InvalidArgument(format!(
            "feature id {} outside dimension {dimension}",
            x.dimension() - 1
        )));
    }
    Ok(())
}

pub fn train(
    examples: &[SparseVector],
    labels: &[Label],
    dimension: usize,
    config: &TrainConfig,
) -> Result<LinearModel> {
    train_with_report(examples, labels, dimension, config).map(|r| r.model)
}

pub fn train_with_report(
    examples: &[SparseVector],
    labels: &[Label],
    dimension: usize,
    config: &TrainConfig,
) -> Result<TrainReport> {
    config.validate()?;
    check_inputs(examples, labels, dimension)?;

    let n = examples.len();
    let c = config.penalty;
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    // diagonal of the bias-augmented Gram matrix
    let q_diag: Vec<f64> = examples.iter().map(|x| x.squared_norm() + 1.0).collect();

    let mut w = vec![0.0; dimension];
    let mut b = 0.0;
    let mut alpha = vec![0.0; n];
    let mut index: Vec<usize> = (0..n).collect();
    let mut active = n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut pg_max_old = f64::INFINITY;
    let mut pg_min_old = f64::NEG_INFINITY;
    let mut dual_trace = Vec::new();
    let mut converged = false;
    let mut epochs = 0;

    while epochs < config.max_epochs {
        epochs += 1;
        let mut pg_max_new = f64::NEG_INFINITY;
        let mut pg_min_new = f64::INFINITY;
        index[..active].shuffle(&mut rng);

        let mut s = 0;
        while s < active {
            let i = index[s];
            let x = &examples[i];
            let g = y[i] * (x.dot_dense(&w) + b) - 1.0;

            let mut pg = 0.0;
            if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g < 0.0 {
                    pg = g;
                }
            } else if alpha[i] == c {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g > 0.0 {
                    pg = g;
                }
            } else {
                pg = g;
            }
            pg_max_new = pg_max_new.max(pg);
            pg_min_new = pg_min_new.min(pg);

            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * y[i];
                for &(id, v) in x.entries() {
                    w[id as usize] += step * v;
                }
                b += step;
            }
            s += 1;
        }
        dual_trace.push(dual_objective(&alpha, &w, b));

        if pg_max_new - pg_min_new <= config.tolerance {
            if active == n {
                converged = true;
                break;
            }
            // re-check every coordinate before stopping
            active = n;
            pg_max_old = f64::INFINITY;
            pg_min_old = f64::NEG_INFINITY;
            continue;
        }
        pg_max_old = if pg_max_new <= 0.0 { f64::INFINITY } else { pg_max_new };
        pg_min_old = if pg_min_new >= 0.0 {
            f64::NEG_INFINITY
        } else {
            pg_min_new
        };
    }
    if !converged {
        log::warn!("dual coordinate descent hit max_epochs = {}", config.max_epochs);
    }

    let objective = primal_objective(&w, b, examples, labels, c);
    let dual = dual_objective(&alpha, &w, b);
    Ok(TrainReport {
        model: LinearModel {
            weights: w,
            bias: b,
            objective,
        },
        alpha,
        dual_objective: dual,
        dual_trace,
        epochs,
        converged,
    })
}
