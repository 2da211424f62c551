//! Dataset loaders for the two on-disk layouts.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::document::{Document, Label};
use super::tokenize::{expand_ngrams, split_words, FeatureConfig, NgramOrder};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetFormat {
    /// `<root>/pos/*` and `<root>/neg/*`, one document per file.
    DirPerClass,
    /// One `label TAB text` record per line.
    LabeledLines,
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetFormat::DirPerClass => "dir-per-class",
            DatasetFormat::LabeledLines => "labeled-lines",
        })
    }
}

impl FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "dir-per-class" | "dir" => Ok(DatasetFormat::DirPerClass),
            "labeled-lines" | "lines" => Ok(DatasetFormat::LabeledLines),
            other => Err(format!(
                "unknown dataset format `{other}` (expected dir-per-class|labeled-lines)"
            )),
        }
    }
}

/// Loads a dataset as unigram documents, sorted by document id.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Vec<Document>> {
    let docs = match format {
        DatasetFormat::DirPerClass => load_dir_per_class(path)?,
        DatasetFormat::LabeledLines => load_labeled_lines(path)?,
    };
    if docs.is_empty() {
        return Err(Error::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    let empty = docs.iter().filter(|d| d.is_empty()).count();
    if empty > 0 {
        log::warn!("{}: {empty} documents have no tokens", path.display());
    }
    Ok(docs)
}

/// Re-expands unigram documents into the feature stream for `config`.
pub fn with_features(docs: &[Document], config: FeatureConfig) -> Vec<Document> {
    if config.order == NgramOrder::Unigram {
        return docs.to_vec();
    }
    docs.par_iter()
        .map(|d| Document::new(d.id.clone(), d.label, expand_ngrams(&d.tokens, config)))
        .collect()
}

fn list_class_files(root: &Path, class: &'static str) -> Result<Vec<PathBuf>> {
    let dir = root.join(class);
    if !dir.is_dir() {
        return Err(Error::MissingClassDir {
            path: root.to_path_buf(),
            class,
        });
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
        let entry = entry.map_err(|e| Error::io(&dir, e))?;
        let name = entry.file_name();
        if name.to_string_lossy().starts_with('.') {
            continue;
        }
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn load_dir_per_class(root: &Path) -> Result<Vec<Document>> {
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset directory not found"),
        ));
    }
    let mut jobs = Vec::new();
    for (class, label) in [("pos", Label::Pos), ("neg", Label::Neg)] {
        for file in list_class_files(root, class)? {
            jobs.push((class, label, file));
        }
    }
    let mut docs = jobs
        .par_iter()
        .map(|(class, label, file)| {
            let bytes = fs::read(file).map_err(|e| Error::io(file, e))?;
            let text = String::from_utf8_lossy(&bytes);
            let name = file.file_name().unwrap_or_default().to_string_lossy();
            Ok(Document::new(format!("{class}/{name}"), *label, split_words(&text)))
        })
        .collect::<Result<Vec<_>>>()?;
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

fn load_labeled_lines(path: &Path) -> Result<Vec<Document>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let mut docs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (label, body) = line.split_once('\t').ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: "expected `label TAB text`".to_string(),
        })?;
        let label = label.parse::<Label>().map_err(|_| Error::BadLabel {
            path: path.to_path_buf(),
            line: line_no,
            label: label.to_string(),
        })?;
        docs.push(Document::new(format!("line{line_no:08}"), label, split_words(body)));
    }
    Ok(docs)
}
