use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: negative weight {weight} on edge ({u}, {v})")]
    NegativeWeight {
        line: usize,
        u: usize,
        v: usize,
        weight: f64,
    },

    #[error("line {line}: edge ({u}, {v}) listed more than once")]
    Asymmetric { line: usize, u: usize, v: usize },

    #[error("graph with {rows}x{cols} vertices exceeds the supported vertex count")]
    TooLarge { rows: usize, cols: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("component count k={k} invalid for graph with {n} vertices")]
    InvalidComponentCount { k: usize, n: usize },

    #[error("worker count p={p} invalid for k={k} components")]
    InvalidWorkerCount { p: usize, k: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("oracle built for n={oracle} but graph has n={graph}")]
    OracleMismatch { oracle: usize, graph: usize },

    #[error("oracle file truncated")]
    Truncated,

    #[error("bad oracle file magic")]
    BadMagic,

    #[error("unsupported oracle format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("oracle checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },

    #[error("malformed oracle file: {0}")]
    Malformed(String),

    #[error("worker channel closed")]
    WorkerGone,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
