use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: missing class directory `{class}`")]
    MissingClassDir { path: PathBuf, class: &'static str },

    #[error("{path}:{line}: unparseable label `{label}`")]
    BadLabel { path: PathBuf, line: usize, label: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: dataset contains no documents")]
    EmptyDataset { path: PathBuf },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("no token occurs at least {min_count} times in the training documents")]
    EmptyVocabulary { min_count: u64 },

    #[error("class {label} has {found} documents, fewer than the {k} folds requested")]
    ClassTooSmall { label: i8, found: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("one-class or empty stats: {0}")]
    DegenerateStats(String),

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("feature dimension is zero")]
    ZeroDimension,

    #[error("all differences zero")]
    AllDifferencesZero,

    #[error("length mismatch: {left} predictions vs {right} labels")]
    LengthMismatch { left: usize, right: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
