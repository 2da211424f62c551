//! Benchmark grids: (dataset × scheme × n-gram) cells evaluated with shared
//! folds and seeds, and the table rendering of their accuracies.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, run_cv, run_train_test, wilcoxon_signed_ranks, EvalReport, PairedComparison, PipelineConfig};
use crate::corpus::{load_dataset, DatasetFormat, Document, FeatureConfig, NgramOrder};
use crate::svm::TrainConfig;
use crate::weighting::{Scaling, Scheme, WeightingConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub path: PathBuf,
    pub format: DatasetFormat,
    /// Held-out test set; cross-validation is used when absent.
    pub test_path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellSpec {
    pub dataset: String,
    pub scheme: Scheme,
    pub order: NgramOrder,
}

impl CellSpec {
    pub fn method(&self) -> String {
        format!("{}-{}", self.scheme, self.order.short_name())
    }
}

/// Settings shared by every cell of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSettings {
    pub folds: usize,
    pub seed: u64,
    pub min_count: u64,
    pub include_unigrams: bool,
    pub gamma: f64,
    pub alpha: f64,
    pub scaling: Scaling,
    /// `None` keeps each scheme's default.
    pub normalize: Option<bool>,
    pub train: TrainConfig,
}

impl Default for BenchmarkSettings {
    fn default() -> Self {
        BenchmarkSettings {
            folds: super::DEFAULT_FOLDS,
            seed: crate::corpus::DEFAULT_SEED,
            min_count: super::DEFAULT_MIN_COUNT,
            include_unigrams: true,
            gamma: 1.0,
            alpha: 1.0,
            scaling: Scaling::Log,
            normalize: None,
            train: TrainConfig::default(),
        }
    }
}

impl BenchmarkSettings {
    pub fn pipeline(&self, scheme: Scheme, order: NgramOrder) -> PipelineConfig {
        let defaults = WeightingConfig::for_scheme(scheme);
        PipelineConfig {
            features: FeatureConfig {
                order,
                include_unigrams: self.include_unigrams,
            },
            min_count: self.min_count,
            weighting: WeightingConfig {
                scheme,
                gamma: self.gamma,
                alpha: self.alpha,
                scaling: self.scaling,
                normalize: self.normalize.unwrap_or(defaults.normalize),
            },
            train: TrainConfig {
                seed: derive_seed(self.seed, 0),
                ..self.train
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct CellOutcome {
    pub cell: CellSpec,
    pub config: Option<PipelineConfig>,
    pub result: Result<EvalReport, String>,
}

struct LoadedDataset {
    train: Vec<Document>,
    test: Option<Vec<Document>>,
}

fn load(spec: &DatasetSpec) -> Result<LoadedDataset, String> {
    let train = load_dataset(&spec.path, spec.format).map_err(|e| e.to_string())?;
    let test = match &spec.test_path {
        Some(p) => Some(load_dataset(p, spec.format).map_err(|e| e.to_string())?),
        None => None,
    };
    Ok(LoadedDataset { train, test })
}

/// Runs every cell. A failing dataset or cell is reported in its outcome
/// and does not stop the others. Outcomes follow the order of `cells`.
///
/// All cells of a dataset share one fold assignment (seeded by
/// `settings.seed`), so scheme comparisons are paired fold by fold.
pub fn run_benchmark(datasets: &[DatasetSpec], cells: &[CellSpec], settings: &BenchmarkSettings) -> Vec<CellOutcome> {
    let used: Vec<&DatasetSpec> = datasets
        .iter()
        .filter(|d| cells.iter().any(|c| c.dataset == d.name))
        .collect();
    let loaded: BTreeMap<&str, Result<LoadedDataset, String>> =
        used.par_iter().map(|d| (d.name.as_str(), load(d))).collect();

    cells
        .par_iter()
        .map(|cell| {
            let config = settings.pipeline(cell.scheme, cell.order);
            let result = match loaded.get(cell.dataset.as_str()) {
                None => Err(format!("unknown dataset `{}`", cell.dataset)),
                Some(Err(e)) => Err(e.clone()),
                Some(Ok(data)) => {
                    log::info!("running {} on {}", cell.method(), cell.dataset);
                    let report = match &data.test {
                        Some(test) => run_train_test(&data.train, test, &config),
                        None => run_cv(&data.train, settings.folds, &config, settings.seed),
                    };
                    report.map(|r| r.with_dataset(&cell.dataset)).map_err(|e| e.to_string())
                }
            };
            CellOutcome {
                cell: cell.clone(),
                config: Some(config),
                result,
            }
        })
        .collect()
}

/// Canonical row order of the results table.
pub const METHOD_ORDER: [(Scheme, NgramOrder); 6] = [
    (Scheme::Tfidf, NgramOrder::Unigram),
    (Scheme::Tfidf, NgramOrder::Bigram),
    (Scheme::CredTfidf, NgramOrder::Unigram),
    (Scheme::CredTfidf, NgramOrder::Bigram),
    (Scheme::Nbsvm, NgramOrder::Unigram),
    (Scheme::Nbsvm, NgramOrder::Bigram),
];

/// Mean accuracy (fraction) of a successful cell.
pub fn cell_accuracy(outcomes: &[CellOutcome], dataset: &str, scheme: Scheme, order: NgramOrder) -> Option<f64> {
    outcomes
        .iter()
        .find(|o| o.cell.dataset == dataset && o.cell.scheme == scheme && o.cell.order == order)
        .and_then(|o| o.result.as_ref().ok())
        .map(|r| r.mean_accuracy)
}

/// Paired `(a, b)` accuracies of scheme `a` against scheme `b` over every
/// dataset and n-gram order where both cells succeeded, in percent.
pub fn paired_cells(outcomes: &[CellOutcome], a: Scheme, b: Scheme) -> Vec<(String, f64, f64)> {
    let mut datasets: Vec<&str> = Vec::new();
    for o in outcomes {
        if !datasets.contains(&o.cell.dataset.as_str()) {
            datasets.push(&o.cell.dataset);
        }
    }
    let mut out = Vec::new();
    for order in [NgramOrder::Unigram, NgramOrder::Bigram] {
        for d in &datasets {
            if let (Some(x), Some(y)) = (
                cell_accuracy(outcomes, d, a, order),
                cell_accuracy(outcomes, d, b, order),
            ) {
                out.push((format!("{d}/{}", order.short_name()), 100.0 * x, 100.0 * y));
            }
        }
    }
    out
}

/// Wilcoxon comparison of scheme `a` against `b` over the paired cells.
pub fn compare_schemes(outcomes: &[CellOutcome], a: Scheme, b: Scheme) -> Option<PairedComparison> {
    let pairs: Vec<(f64, f64)> = paired_cells(outcomes, a, b)
        .into_iter()
        .map(|(_, x, y)| (x, y))
        .collect();
    wilcoxon_signed_ranks(&pairs).ok()
}

/// Renders the accuracy grid: one row per method, one column per dataset,
/// accuracies in percent with one decimal.
pub fn render_grid(outcomes: &[CellOutcome]) -> String {
    let mut datasets: Vec<&str> = Vec::new();
    for o in outcomes {
        if !datasets.contains(&o.cell.dataset.as_str()) {
            datasets.push(&o.cell.dataset);
        }
    }
    let width = datasets.iter().map(|d| d.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = write!(out, "{:<16}", "method");
    for d in &datasets {
        let _ = write!(out, " {d:>width$}");
    }
    out.push('\n');
    for (scheme, order) in METHOD_ORDER {
        let present = outcomes
            .iter()
            .any(|o| o.cell.scheme == scheme && o.cell.order == order);
        if !present {
            continue;
        }
        let _ = write!(out, "{:<16}", format!("{scheme}-{}", order.short_name()));
        for d in &datasets {
            let cell = outcomes
                .iter()
                .find(|o| o.cell.dataset == *d && o.cell.scheme == scheme && o.cell.order == order);
            let text = match cell.map(|o| &o.result) {
                None => "-".to_string(),
                Some(Ok(r)) => format!("{:.1}", 100.0 * r.mean_accuracy),
                Some(Err(_)) => "ERR".to_string(),
            };
            let _ = write!(out, " {text:>width$}");
        }
        out.push('\n');
    }
    if let Some(cmp) = compare_schemes(outcomes, Scheme::CredTfidf, Scheme::Tfidf) {
        let _ = writeln!(
            out,
            "\ncred-tfidf vs tfidf: W+={} W-={} n={} p={:.4} ({:?})",
            cmp.w_plus, cmp.w_minus, cmp.n_nonzero, cmp.p_value, cmp.method
        );
    }
    out
}
