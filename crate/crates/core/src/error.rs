use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image has no foreground pixels")]
    EmptyImage,

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{path}: malformed PGM: {msg}")]
    Pgm { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    #[error("{path}:{line}: malformed row: {msg}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("{path}:{line}: label {label} out of range 0..{classes}")]
    LabelOutOfRange {
        path: PathBuf,
        line: u64,
        label: i64,
        classes: usize,
    },

    #[error("{manifest}:{line}: {source}")]
    Sample {
        manifest: PathBuf,
        line: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("class {0} has fewer than 2 samples")]
    InsufficientClassSamples(usize),

    #[error("training set is empty")]
    EmptyTrainSet,

    #[error("evaluation set is empty")]
    EmptySet,

    #[error("corrupt model (line {line}): {msg}")]
    CorruptModel { line: usize, msg: String },

    #[error("no retrievable source image for sample {0}")]
    MissingSource(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }
}
