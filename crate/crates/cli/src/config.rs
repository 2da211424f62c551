//! Benchmark configuration: a flat `key = value` file plus command-line
//! overrides.
//!
//! ```text
//! folds = 10
//! seed = 42
//! dataset.pl-sh.path = pl-sh.txt
//! dataset.pl-sh.format = labeled-lines
//! dataset.imdb.path = imdb/train
//! dataset.imdb.test = imdb/test
//! dataset.imdb.format = dir-per-class
//! cell = pl-sh cred-tfidf bi
//! cell = * * *
//! ```
//!
//! `cell` lines take a dataset, a scheme and an n-gram order; `*` expands
//! to every value. Relative dataset paths are tried against the config
//! file's directory, then against `$CREDWEIGHT_DATA`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use credweight::corpus::{DatasetFormat, NgramOrder};
use credweight::eval::benchmark::{BenchmarkSettings, CellSpec, DatasetSpec};
use credweight::weighting::{Scaling, Scheme};

/// Invalid configuration or cell list; the process exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

pub const SCHEMES: [Scheme; 3] = [Scheme::Tfidf, Scheme::CredTfidf, Scheme::Nbsvm];
pub const ORDERS: [NgramOrder; 2] = [NgramOrder::Unigram, NgramOrder::Bigram];

/// Settings given on the command line; each one wins over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub scaling: Option<Scaling>,
    pub normalize: Option<bool>,
    pub min_count: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub datasets: Vec<DatasetSpec>,
    pub cells: Vec<CellSpec>,
    pub settings: BenchmarkSettings,
    /// Worker threads, 0 for one per core.
    pub jobs: usize,
    pub out: PathBuf,
}

#[derive(Default)]
struct RawDataset {
    name: String,
    path: Option<String>,
    format: Option<String>,
    test: Option<String>,
}

/// Parsed but unresolved file contents.
#[derive(Default)]
pub struct FileConfig {
    settings: Vec<(usize, String, String)>,
    datasets: Vec<RawDataset>,
    cells: Vec<(usize, Vec<String>)>,
    base_dir: PathBuf,
}

impl FileConfig {
    pub fn parse(text: &str, source: &Path) -> Result<Self, UsageError> {
        let mut cfg = FileConfig {
            base_dir: source.parent().map(Path::to_path_buf).unwrap_or_default(),
            ..FileConfig::default()
        };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{}:{line_no}: expected `key = value`", source.display())))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "cell" {
                let parts: Vec<String> = value.split_whitespace().map(String::from).collect();
                if parts.len() != 3 {
                    return Err(usage(format!(
                        "{}:{line_no}: cell needs `<dataset> <scheme> <ngram>`",
                        source.display()
                    )));
                }
                cfg.cells.push((line_no, parts));
            } else if let Some(rest) = key.strip_prefix("dataset.") {
                let (name, field) = rest.rsplit_once('.').ok_or_else(|| {
                    usage(format!(
                        "{}:{line_no}: expected dataset.<name>.<field>",
                        source.display()
                    ))
                })?;
                let pos = match cfg.datasets.iter().position(|d| d.name == name) {
                    Some(p) => p,
                    None => {
                        cfg.datasets.push(RawDataset {
                            name: name.to_string(),
                            ..RawDataset::default()
                        });
                        cfg.datasets.len() - 1
                    }
                };
                let d = &mut cfg.datasets[pos];
                let slot = match field {
                    "path" => &mut d.path,
                    "format" => &mut d.format,
                    "test" => &mut d.test,
                    other => {
                        return Err(usage(format!(
                            "{}:{line_no}: unknown dataset field `{other}` (expected path|format|test)",
                            source.display()
                        )))
                    }
                };
                *slot = Some(value.to_string());
            } else {
                cfg.settings.push((line_no, key.to_string(), value.to_string()));
            }
        }
        Ok(cfg)
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, UsageError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| usage(format!("line {line}: bad value for `{key}`: {e}")))
}

/// Resolves a dataset path: absolute paths as given, relative ones against
/// each base directory in turn, falling back to the first candidate.
pub fn resolve_path(path: &str, bases: &[PathBuf]) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    let candidates: Vec<PathBuf> = bases.iter().map(|b| b.join(p)).collect();
    candidates
        .iter()
        .find(|c| c.exists())
        .cloned()
        .unwrap_or_else(|| candidates.into_iter().next().unwrap_or_else(|| p.to_path_buf()))
}

/// Base directories for relative dataset paths.
pub fn search_bases(first: PathBuf) -> Vec<PathBuf> {
    let mut bases = vec![first];
    if let Some(root) = std::env::var_os("CREDWEIGHT_DATA") {
        bases.push(PathBuf::from(root));
    }
    bases
}

fn expand<T: Copy + FromStr>(token: &str, all: &[T], line: usize) -> Result<Vec<T>, UsageError>
where
    T::Err: fmt::Display,
{
    if token == "*" {
        Ok(all.to_vec())
    } else {
        Ok(vec![parse_value(token, token, line)?])
    }
}

impl Plan {
    pub fn from_file(cfg: FileConfig, overrides: &Overrides, only_dataset: Option<&str>) -> Result<Self, UsageError> {
        let mut settings = BenchmarkSettings::default();
        let mut jobs = 0;
        let mut out = PathBuf::from("credweight-out");
        for (line, key, value) in &cfg.settings {
            let (line, key, value) = (*line, key.as_str(), value.as_str());
            match key {
                "folds" => settings.folds = parse_value(key, value, line)?,
                "seed" => settings.seed = parse_value(key, value, line)?,
                "gamma" => settings.gamma = parse_value(key, value, line)?,
                "alpha" => settings.alpha = parse_value(key, value, line)?,
                "scaling" => settings.scaling = parse_value(key, value, line)?,
                "normalize" => settings.normalize = Some(parse_value(key, value, line)?),
                "min_count" => settings.min_count = parse_value(key, value, line)?,
                "include_unigrams" => settings.include_unigrams = parse_value(key, value, line)?,
                "C" | "penalty" => settings.train.penalty = parse_value(key, value, line)?,
                "tolerance" => settings.train.tolerance = parse_value(key, value, line)?,
                "max_epochs" => settings.train.max_epochs = parse_value(key, value, line)?,
                "jobs" => jobs = parse_value(key, value, line)?,
                "out" => out = cfg.base_dir.join(value),
                other => return Err(usage(format!("line {line}: unknown key `{other}`"))),
            }
        }

        let bases = search_bases(cfg.base_dir.clone());
        let mut datasets = Vec::new();
        for d in &cfg.datasets {
            let path = d
                .path
                .as_deref()
                .ok_or_else(|| usage(format!("dataset `{}` has no path", d.name)))?;
            let format = match d.format.as_deref() {
                Some(f) => f
                    .parse()
                    .map_err(|e: String| usage(format!("dataset `{}`: {e}", d.name)))?,
                None => guess_format(&resolve_path(path, &bases)),
            };
            datasets.push(DatasetSpec {
                name: d.name.clone(),
                path: resolve_path(path, &bases),
                format,
                test_path: d.test.as_deref().map(|t| resolve_path(t, &bases)),
            });
        }

        let names: Vec<String> = datasets.iter().map(|d| d.name.clone()).collect();
        let mut cells: Vec<CellSpec> = Vec::new();
        for (line, parts) in &cfg.cells {
            let dataset_names = if parts[0] == "*" {
                names.clone()
            } else if names.contains(&parts[0]) {
                vec![parts[0].clone()]
            } else {
                return Err(usage(format!("line {line}: cell names unknown dataset `{}`", parts[0])));
            };
            for dataset in &dataset_names {
                for scheme in expand(&parts[1], &SCHEMES, *line)? {
                    for order in expand(&parts[2], &ORDERS, *line)? {
                        let cell = CellSpec {
                            dataset: dataset.clone(),
                            scheme,
                            order,
                        };
                        if !cells.contains(&cell) {
                            cells.push(cell);
                        }
                    }
                }
            }
        }
        if let Some(only) = only_dataset {
            if !names.iter().any(|n| n == only) {
                return Err(usage(format!("--dataset `{only}` is not defined in the config")));
            }
            cells.retain(|c| c.dataset == only);
        }
        let mut plan = Plan {
            datasets,
            cells,
            settings,
            jobs,
            out,
        };
        plan.apply(overrides)?;
        Ok(plan)
    }

    /// A single-dataset plan built from flags alone.
    pub fn from_flags(
        dataset: DatasetSpec,
        schemes: &[Scheme],
        orders: &[NgramOrder],
        overrides: &Overrides,
    ) -> Result<Self, UsageError> {
        let mut cells = Vec::new();
        for &scheme in schemes {
            for &order in orders {
                cells.push(CellSpec {
                    dataset: dataset.name.clone(),
                    scheme,
                    order,
                });
            }
        }
        let mut plan = Plan {
            datasets: vec![dataset],
            cells,
            settings: BenchmarkSettings::default(),
            jobs: 0,
            out: PathBuf::from("credweight-out"),
        };
        plan.apply(overrides)?;
        Ok(plan)
    }

    fn apply(&mut self, o: &Overrides) -> Result<(), UsageError> {
        let s = &mut self.settings;
        if let Some(v) = o.folds {
            s.folds = v;
        }
        if let Some(v) = o.seed {
            s.seed = v;
        }
        if let Some(v) = o.gamma {
            s.gamma = v;
        }
        if let Some(v) = o.alpha {
            s.alpha = v;
        }
        if let Some(v) = o.scaling {
            s.scaling = v;
        }
        if let Some(v) = o.normalize {
            s.normalize = Some(v);
        }
        if let Some(v) = o.min_count {
            s.min_count = v;
        }
        if let Some(v) = o.jobs {
            self.jobs = v;
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        if s.folds < 2 {
            return Err(usage(format!("folds must be >= 2, got {}", s.folds)));
        }
        if !(s.gamma >= 0.0 && s.gamma.is_finite()) {
            return Err(usage(format!("gamma must be finite and >= 0, got {}", s.gamma)));
        }
        if !(s.alpha > 0.0 && s.alpha.is_finite()) {
            return Err(usage(format!("alpha must be finite and > 0, got {}", s.alpha)));
        }
        if !(s.train.penalty > 0.0 && s.train.penalty.is_finite()) {
            return Err(usage(format!("C must be finite and > 0, got {}", s.train.penalty)));
        }
        if self.cells.is_empty() {
            return Err(usage("no benchmark cells to run"));
        }
        Ok(())
    }
}

/// Directories hold one file per document, anything else one per line.
pub fn guess_format(path: &Path) -> DatasetFormat {
    if path.is_dir() {
        DatasetFormat::DirPerClass
    } else {
        DatasetFormat::LabeledLines
    }
}
