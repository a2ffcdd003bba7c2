use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("line {line}: loop on vertex {vertex} is not allowed")]
    Loop { line: usize, vertex: VertexId },

    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),

    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),

    #[error("edge set is not even: vertex {vertex} has degree {degree}")]
    NotEven { vertex: VertexId, degree: usize },

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("dimension mismatch: expected {expected}, found {found} on edge {edge}")]
    DimensionMismatch {
        edge: EdgeId,
        expected: usize,
        found: usize,
    },

    #[error("edge {0} carries the zero vector")]
    ZeroValue(EdgeId),

    #[error("edge {edge}: value {value:?} is not in the required set")]
    NotInSet { edge: EdgeId, value: Vec<f64> },

    #[error("flow is not conserved: residual {residual} at vertex {vertex}")]
    NotConserved { vertex: VertexId, residual: f64 },

    #[error("edge {0} is a bridge")]
    Bridge(EdgeId),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
