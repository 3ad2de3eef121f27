use std::path::PathBuf;

use thiserror::Error;

/// Problems found while reading or validating corpus input.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: field `{field}`: {message}")]
    Malformed {
        file: String,
        line: u64,
        field: String,
        message: String,
    },

    #[error("{file}: {message}")]
    BadHeader { file: String, message: String },

    #[error("publication {publication_id} references unknown researcher {researcher_id}")]
    DanglingResearcher {
        publication_id: String,
        researcher_id: String,
    },

    #[error("author link references unknown publication {0}")]
    DanglingPublication(String),

    #[error("researcher {researcher_id} belongs to unknown SDS {sds_id}")]
    UnknownSds {
        researcher_id: String,
        sds_id: String,
    },

    #[error("publication {publication_id} has unknown subject category {category}")]
    UnknownCategory {
        publication_id: String,
        category: String,
    },

    #[error("publication {publication_id}: year {year} outside window {start}-{end}")]
    YearOutsideWindow {
        publication_id: String,
        year: i32,
        start: i32,
        end: i32,
    },

    #[error("duplicate {kind} id {id}")]
    Duplicate { kind: &'static str, id: String },

    #[error("{0}")]
    Invalid(String),
}

/// Errors from the statistical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("value at index {index} is negative or not finite: {value}")]
    InvalidValue { index: usize, value: f64 },

    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Top-level error, tagged by pipeline stage where that is known.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validate: {0}")]
    Corpus(#[from] CorpusError),

    #[error("{stage}: {source}")]
    Stats {
        stage: &'static str,
        #[source]
        source: StatsError,
    },

    #[error("{stage}: degenerate analysis: {message}")]
    Degenerate {
        stage: &'static str,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("output: cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn stats(stage: &'static str, source: StatsError) -> Self {
        Error::Stats { stage, source }
    }

    /// Process exit status: 1 validation, 2 I/O, 3 degenerate analysis.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Corpus(CorpusError::Io { .. }) | Error::Output { .. } => 2,
            Error::Corpus(_) | Error::Config(_) => 1,
            Error::Stats { source, .. } => match source {
                StatsError::Degenerate(_) | StatsError::TooFew { .. } => 3,
                _ => 1,
            },
            Error::Degenerate { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
