use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph dimension must be at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    #[error("vertex {vertex} out of range for dimension {dim}")]
    VertexOutOfRange { vertex: usize, dim: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
