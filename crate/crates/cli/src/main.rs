mod artifacts;
mod config;
mod output;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use credweight::corpus::{
    build_vocabulary, load_dataset, with_features, DatasetFormat, Document, FeatureConfig, NgramOrder,
};
use credweight::eval::benchmark::{render_grid, run_benchmark, DatasetSpec};
use credweight::eval::{accuracy, FittedPipeline, PipelineConfig, DEFAULT_MIN_COUNT};
use credweight::svm::TrainConfig;
use credweight::weighting::{build_token_stats, Scaling, Scheme, SparseVector, Weighter, WeightingConfig};

use config::{guess_format, resolve_path, search_bases, FileConfig, Overrides, Plan, UsageError, ORDERS, SCHEMES};

#[derive(Parser)]
#[command(
    name = "credweight",
    version,
    about = "Credibility-adjusted tf-idf text classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a grid of (dataset, scheme, n-gram) cells and write reports.
    Benchmark(BenchmarkArgs),
    /// Fit vocabulary, statistics and model on a dataset and save them.
    Train(TrainArgs),
    /// Label documents with a saved model.
    Predict(PredictArgs),
    /// Print the weighted sparse vector of every document.
    Vectorize(VectorizeArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Dataset path; relative paths also resolve under $CREDWEIGHT_DATA.
    #[arg(long)]
    dataset: Option<String>,
    /// dir-per-class or labeled-lines (guessed from the path when omitted).
    #[arg(long)]
    format: Option<DatasetFormat>,
}

#[derive(Args)]
struct WeightingArgs {
    /// Credibility smoothing strength (default 1.0).
    #[arg(long)]
    gamma: Option<f64>,
    /// NBSVM count smoothing (default 1.0).
    #[arg(long)]
    alpha: Option<f64>,
    /// none, log or augmented.
    #[arg(long)]
    scaling: Option<Scaling>,
    /// Skip l2 normalization.
    #[arg(long)]
    no_normalize: bool,
    /// Minimum training-set count for a vocabulary token.
    #[arg(long)]
    min_count: Option<u64>,
    /// Seed for fold assignment and solver order (default 42).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Benchmark config file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// With --config: restrict to this dataset name. Without: the dataset path.
    #[command(flatten)]
    data: DatasetArgs,
    /// Held-out test set; cross-validation is used when absent.
    #[arg(long)]
    test: Option<String>,
    /// Schemes to run (comma separated); all three by default.
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<Scheme>,
    /// N-gram orders to run (comma separated); uni and bi by default.
    #[arg(long, value_delimiter = ',')]
    ngram: Vec<NgramOrder>,
    #[command(flatten)]
    weighting: WeightingArgs,
    /// Cross-validation folds (default 10).
    #[arg(long)]
    folds: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "CREDWEIGHT_JOBS")]
    jobs: Option<usize>,
    /// Output directory for report.jsonl, timings.jsonl and table.txt.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value = "cred-tfidf")]
    scheme: Scheme,
    #[arg(long, default_value = "bi")]
    ngram: NgramOrder,
    #[command(flatten)]
    weighting: WeightingArgs,
    /// Model directory to create.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Directory written by `train`.
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DatasetArgs,
    /// Vocabulary file to use instead of the model directory's own.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Statistics file to use instead of the model directory's own.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write predictions here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VectorizeArgs {
    /// Use a trained model directory's vocabulary and statistics; otherwise
    /// they are fitted on --dataset.
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    data: DatasetArgs,
    /// Vectorize this dataset instead of --dataset.
    #[arg(long)]
    test: Option<String>,
    #[arg(long, default_value = "cred-tfidf")]
    scheme: Scheme,
    #[arg(long, default_value = "uni")]
    ngram: NgramOrder,
    #[command(flatten)]
    weighting: WeightingArgs,
    /// Write vectors here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Benchmark(a) => benchmark(a),
        Command::Train(a) => train(a).map(|_| ExitCode::SUCCESS),
        Command::Predict(a) => predict(a).map(|_| ExitCode::SUCCESS),
        Command::Vectorize(a) => vectorize(a).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn dataset_path(path: &str) -> PathBuf {
    resolve_path(path, &search_bases(PathBuf::from(".")))
}

fn load(path: &str, format: Option<DatasetFormat>) -> Result<Vec<Document>> {
    let resolved = dataset_path(path);
    let format = format.unwrap_or_else(|| guess_format(&resolved));
    Ok(load_dataset(&resolved, format)?)
}

fn required(data: &DatasetArgs) -> Result<&str> {
    data.dataset
        .as_deref()
        .ok_or_else(|| UsageError("--dataset is required".into()).into())
}

fn pipeline_config(scheme: Scheme, order: NgramOrder, w: &WeightingArgs) -> Result<PipelineConfig> {
    let defaults = WeightingConfig::for_scheme(scheme);
    let weighting = WeightingConfig {
        gamma: w.gamma.unwrap_or(defaults.gamma),
        alpha: w.alpha.unwrap_or(defaults.alpha),
        scaling: w.scaling.unwrap_or(defaults.scaling),
        normalize: defaults.normalize && !w.no_normalize,
        ..defaults
    };
    weighting.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(PipelineConfig {
        features: FeatureConfig::new(order),
        min_count: w.min_count.unwrap_or(DEFAULT_MIN_COUNT),
        weighting,
        train: TrainConfig {
            seed: w.seed.unwrap_or(TrainConfig::default().seed),
            ..TrainConfig::default()
        },
    })
}

/// Dataset name for a flag-only benchmark: the file stem, or the parent
/// directory for `.../<name>/train`.
fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if stem == "train" {
        if let Some(parent) = path.parent().and_then(Path::file_name) {
            return parent.to_string_lossy().into_owned();
        }
    }
    if stem.is_empty() {
        "dataset".into()
    } else {
        stem
    }
}

fn benchmark(a: BenchmarkArgs) -> Result<ExitCode> {
    let overrides = Overrides {
        folds: a.folds,
        seed: a.weighting.seed,
        gamma: a.weighting.gamma,
        alpha: a.weighting.alpha,
        scaling: a.weighting.scaling,
        normalize: a.weighting.no_normalize.then_some(false),
        min_count: a.weighting.min_count,
        jobs: a.jobs,
        out: a.out.clone(),
    };
    let plan = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut plan = Plan::from_file(FileConfig::parse(&text, path)?, &overrides, a.data.dataset.as_deref())?;
            if !a.scheme.is_empty() || !a.ngram.is_empty() {
                plan.cells.retain(|c| {
                    (a.scheme.is_empty() || a.scheme.contains(&c.scheme))
                        && (a.ngram.is_empty() || a.ngram.contains(&c.order))
                });
                if plan.cells.is_empty() {
                    return Err(UsageError("no benchmark cells left after --scheme/--ngram filtering".into()).into());
                }
            }
            plan
        }
        None => {
            let path = dataset_path(required(&a.data)?);
            let spec = DatasetSpec {
                name: dataset_name(&path),
                format: a.data.format.unwrap_or_else(|| guess_format(&path)),
                test_path: a.test.as_deref().map(dataset_path),
                path,
            };
            let schemes = if a.scheme.is_empty() {
                SCHEMES.to_vec()
            } else {
                a.scheme.clone()
            };
            let orders = if a.ngram.is_empty() {
                ORDERS.to_vec()
            } else {
                a.ngram.clone()
            };
            Plan::from_flags(spec, &schemes, &orders, &overrides)?
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs)
        .build()
        .context("starting the worker pool")?;
    let outcomes = pool.install(|| run_benchmark(&plan.datasets, &plan.cells, &plan.settings));

    let grid = render_grid(&outcomes);
    let mut table = grid.clone();
    let failures: Vec<String> = outcomes
        .iter()
        .filter_map(|o| {
            o.result
                .as_ref()
                .err()
                .map(|e| format!("{} {}: {e}", o.cell.dataset, o.cell.method()))
        })
        .collect();
    for f in &failures {
        let _ = writeln!(table, "error: {f}");
    }
    output::write_jsonl(
        &plan.out.join("report.jsonl"),
        &output::report_records(&plan, &outcomes),
    )?;
    output::write_jsonl(&plan.out.join("timings.jsonl"), &output::timing_records(&outcomes))?;
    output::write_atomic(&plan.out.join("table.txt"), table.as_bytes())?;

    print!("{grid}");
    for f in &failures {
        eprintln!("cell failed: {f}");
    }
    eprintln!("reports written to {}", plan.out.display());
    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn train(a: TrainArgs) -> Result<()> {
    let config = pipeline_config(a.scheme, a.ngram, &a.weighting)?;
    let docs = load(required(&a.data)?, a.data.format)?;
    let featured = with_features(&docs, config.features);
    let refs: Vec<&Document> = featured.iter().collect();
    let fitted = FittedPipeline::fit(&refs, &config)?;
    artifacts::save(&a.out, &fitted, &config, docs.len())?;
    let predictions: Vec<_> = featured.iter().map(|d| fitted.predict(d).0).collect();
    let gold: Vec<_> = featured.iter().map(|d| d.label).collect();
    eprintln!(
        "trained {} on {} documents: {} features, training accuracy {:.4}; saved to {}",
        config.method_name(),
        docs.len(),
        fitted.vocabulary.len(),
        accuracy(&predictions, &gold)?,
        a.out.display()
    );
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => output::write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn predict(a: PredictArgs) -> Result<()> {
    let loaded = artifacts::load(&a.model, a.vocab.as_deref(), a.stats.as_deref())?;
    let docs = load(required(&a.data)?, a.data.format)?;
    let featured = with_features(&docs, loaded.manifest.config.features);
    let mut text = String::new();
    let mut empty = 0;
    let mut predictions = Vec::with_capacity(featured.len());
    for d in &featured {
        let x = loaded.weighter.vectorize(d, &loaded.vocabulary);
        if x.is_empty() {
            empty += 1;
            log::warn!("{}: no vocabulary tokens, decided by the bias alone", d.id);
        }
        let value = loaded.model.decision_value(&x);
        let label = loaded.model.predict(&x);
        predictions.push(label);
        let _ = writeln!(text, "{}\t{label}\t{value}", d.id);
    }
    emit(a.out.as_deref(), &text)?;
    let gold: Vec<_> = featured.iter().map(|d| d.label).collect();
    eprintln!(
        "{} documents, {empty} without vocabulary tokens, accuracy against file labels {:.4}",
        featured.len(),
        accuracy(&predictions, &gold)?
    );
    Ok(())
}

fn format_vector(v: &SparseVector) -> String {
    v.entries()
        .iter()
        .map(|(id, w)| format!("{id}:{w}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn vectorize(a: VectorizeArgs) -> Result<()> {
    let train_path = required(&a.data)?;
    let (vocabulary, weighter, features) = match &a.model {
        Some(dir) => {
            let loaded = artifacts::load(dir, None, None)?;
            let features = loaded.manifest.config.features;
            (loaded.vocabulary, loaded.weighter, features)
        }
        None => {
            let config = pipeline_config(a.scheme, a.ngram, &a.weighting)?;
            let docs = with_features(&load(train_path, a.data.format)?, config.features);
            let vocabulary = build_vocabulary(&docs, config.features.order, config.min_count)?;
            let (stats, corpus) = build_token_stats(&docs, &vocabulary)?;
            let weighter = Weighter::fit(&stats, &corpus, config.weighting)?;
            (vocabulary, weighter, config.features)
        }
    };
    let target = a.test.as_deref().unwrap_or(train_path);
    let docs = with_features(&load(target, a.data.format)?, features);
    let mut text = String::new();
    for d in &docs {
        let v = weighter.vectorize(d, &vocabulary);
        let _ = writeln!(text, "{}\t{}\t{}", d.id, d.label, format_vector(&v));
    }
    emit(a.out.as_deref(), &text)
}
