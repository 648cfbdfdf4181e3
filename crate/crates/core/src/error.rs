use thiserror::Error;

use crate::multigraph::{EdgeId, VertexId};
use crate::structure::ImmersionWitness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} given twice where distinct vertices are required")]
    SameVertex(VertexId),
    #[error("vertex set must be non-empty")]
    EmptyVertexSet,
    #[error("label {0} already names a vertex outside the identified set")]
    LabelCollision(VertexId),
    #[error("edges {0} and {1} do not share exactly one endpoint")]
    NotIncident(EdgeId, EdgeId),
    #[error("edges {0} and {1} are parallel; lifting them would create a loop")]
    ParallelLift(EdgeId, EdgeId),
    #[error("graph too large for {what}: {size} > {limit}")]
    SizeBudget {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid tree-partition: {0}")]
    InvalidPartition(String),
    #[error("invalid edge sum: {0}")]
    InvalidEdgeSum(String),
    #[error("graph contains theta_{} as an immersion at {} and {}", .0.order(), .0.x, .0.y)]
    ContainsTheta(Box<ImmersionWitness>),
    #[error("decomposition did not converge within {0} refinement steps")]
    IterationCap(usize),
}
