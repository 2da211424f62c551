//! Model directories written by `train` and read by `predict` and
//! `vectorize`: vocabulary, statistics table, model, and a manifest holding
//! the configuration and a SHA-256 fingerprint of each file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use credweight::corpus::Vocabulary;
use credweight::eval::{FittedPipeline, PipelineConfig};
use credweight::svm::LinearModel;
use credweight::weighting::{TokenStats, Weighter};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::output::write_atomic;

pub const VOCAB_FILE: &str = "vocab.txt";
pub const STATS_FILE: &str = "stats.txt";
pub const MODEL_FILE: &str = "model.txt";
pub const MANIFEST_FILE: &str = "manifest.json";
const MANIFEST_FORMAT: &str = "credweight-model-dir v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub config: PipelineConfig,
    pub n_train: usize,
    pub vocab_size: usize,
    /// File name to lowercase hex SHA-256.
    pub fingerprints: BTreeMap<String, String>,
}

pub fn fingerprint(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn save(dir: &Path, fitted: &FittedPipeline, config: &PipelineConfig, n_train: usize) -> Result<Manifest> {
    let mut vocab = Vec::new();
    fitted.vocabulary.write_to(&mut vocab)?;
    let mut stats = Vec::new();
    fitted.stats.write_to(&fitted.corpus_stats, &mut stats)?;
    let mut model = Vec::new();
    fitted.model.write_to(&mut model)?;

    let mut fingerprints = BTreeMap::new();
    for (name, bytes) in [(VOCAB_FILE, &vocab), (STATS_FILE, &stats), (MODEL_FILE, &model)] {
        write_atomic(&dir.join(name), bytes)?;
        fingerprints.insert(name.to_string(), fingerprint(bytes));
    }
    let manifest = Manifest {
        format: MANIFEST_FORMAT.into(),
        config: *config,
        n_train,
        vocab_size: fitted.vocabulary.len(),
        fingerprints,
    };
    let mut text = serde_json::to_vec_pretty(&manifest)?;
    text.push(b'\n');
    write_atomic(&dir.join(MANIFEST_FILE), &text)?;
    Ok(manifest)
}

pub struct LoadedModel {
    pub manifest: Manifest,
    pub vocabulary: Vocabulary,
    pub weighter: Weighter,
    pub model: LinearModel,
}

/// Reads `path` and checks it against the manifest fingerprint of `name`.
fn read_checked(manifest: &Manifest, name: &str, path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let expected = manifest
        .fingerprints
        .get(name)
        .with_context(|| format!("manifest has no fingerprint for {name}"))?;
    let actual = fingerprint(&bytes);
    if &actual != expected {
        bail!(
            "fingerprint mismatch: {} has sha256 {actual}, the model was trained with {name} {expected}",
            path.display()
        );
    }
    Ok(bytes)
}

/// Loads a model directory. `vocab` and `stats` replace the directory's own
/// files and must carry the same fingerprints.
pub fn load(dir: &Path, vocab: Option<&Path>, stats: Option<&Path>) -> Result<LoadedModel> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read(&manifest_path).with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: Manifest =
        serde_json::from_slice(&text).with_context(|| format!("parsing {}", manifest_path.display()))?;
    if manifest.format != MANIFEST_FORMAT {
        bail!("{}: unsupported format `{}`", manifest_path.display(), manifest.format);
    }
    let vocab_path: PathBuf = vocab.map_or_else(|| dir.join(VOCAB_FILE), Path::to_path_buf);
    let stats_path: PathBuf = stats.map_or_else(|| dir.join(STATS_FILE), Path::to_path_buf);
    let model_path = dir.join(MODEL_FILE);

    let features = manifest.config.features;
    let vocabulary = Vocabulary::read_from(
        &read_checked(&manifest, VOCAB_FILE, &vocab_path)?[..],
        &vocab_path,
        features.order,
        manifest.config.min_count,
    )?;
    let (token_stats, corpus_stats) =
        TokenStats::read_from(&read_checked(&manifest, STATS_FILE, &stats_path)?[..], &stats_path)?;
    if token_stats.len() != vocabulary.len() {
        bail!(
            "{} has {} rows but the vocabulary has {} tokens",
            stats_path.display(),
            token_stats.len(),
            vocabulary.len()
        );
    }
    let weighter = Weighter::fit(&token_stats, &corpus_stats, manifest.config.weighting)?;
    let model = LinearModel::read_from(
        &read_checked(&manifest, MODEL_FILE, &model_path)?[..],
        &model_path,
        vocabulary.len(),
    )?;
    Ok(LoadedModel {
        manifest,
        vocabulary,
        weighter,
        model,
    })
}
