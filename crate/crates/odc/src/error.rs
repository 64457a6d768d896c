use std::io;
use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed line in an edge-list file (wrong token count, empty label).
    #[error("edge list parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Self-loops are rejected at ingestion.
    #[error("self-loop at line {line}: vertex {label:?} linked to itself")]
    SelfLoop { line: usize, label: String },

    /// A named benchmark graph was loaded but has the wrong vertex count.
    #[error("fixture {name:?} expects {expected} vertices, file has {found}")]
    VertexCountMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    /// Caller passed a value outside an operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Simulation parameters outside their admissible ranges.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Operation requires a trace whose interaction graph settled before the
    /// step cap, but this one ran into `max_steps`.
    #[error("trace did not stabilize before max_steps")]
    NotStabilized,

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
