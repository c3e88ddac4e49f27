use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("parse error: {0}")]
    Format(String),

    #[error("empty table")]
    EmptyTable,

    #[error("unknown sector code {code:?} (not in registry)")]
    Registry { code: String },

    #[error("empty network")]
    EmptyNetwork,

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("undefined assortativity: zero variance")]
    ZeroVariance,

    #[error("undefined assortativity: need at least 2 edges, found {0}")]
    TooFewEdges(usize),

    #[error("leave-one-out network without node {node:?} is degenerate: {source}")]
    DegenerateReplicate {
        node: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("degenerate HITS: {0} vector vanished")]
    DegenerateHits(&'static str),

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("no such input: {}", .0.display())]
    NoSuchInput(PathBuf),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(row: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            row,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
