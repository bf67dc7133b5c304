use thiserror::Error;

fn on_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" on line {line}")
    }
}

/// Errors produced by graph construction, operator assembly and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("random graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("no path between nodes {from} and {to}")]
    NoPath { from: usize, to: usize },
    /// `line` is 1-based; 0 means the error is not tied to a line (JSON input).
    #[error("parse error{}: {message}", on_line(*.line))]
    Parse { line: usize, message: String },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("graph has {nodes} nodes, at most {limit} supported here")]
    TooManyNodes { nodes: usize, limit: usize },
    #[error("wrong graph family: {0}")]
    WrongFamily(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
