use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: expected `u v` or `u v w`, got {content:?}")]
    Malformed { line: usize, content: String },

    #[error("line {line}: weight column present but the graph was read as unweighted")]
    UnexpectedWeight { line: usize },

    #[error("line {line}: weight must be a finite positive number, got {weight}")]
    NonPositiveWeight { line: usize, weight: String },

    #[error("line {line}: self-loop on vertex {label:?}")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: duplicate edge {u:?} -- {v:?}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is disconnected; component sizes {component_sizes:?}")]
    Disconnected { component_sizes: Vec<usize> },

    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("shortest-path count overflowed u64 (source {source_vertex}, vertex {vertex})")]
    SigmaOverflow { source_vertex: usize, vertex: usize },

    #[error("no shortest path passes through any target; dependency scores are all zero")]
    AllZeroDependency,

    #[error("stratum for vertex {vertex} is empty; relative score is unestimable")]
    EmptyStratum { vertex: usize },

    #[error("denominator relative score is zero; ratio is unbounded")]
    ZeroDenominator,

    #[error("vertex {vertex} has zero betweenness")]
    ZeroBetweenness { vertex: usize },

    #[error("target set needs at least two distinct vertices, got {0}")]
    TooFewTargets(usize),

    #[error("vertex {0} appears twice in the target set")]
    DuplicateTarget(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("trace does not belong to this graph: {0}")]
    TraceMismatch(String),

    #[error("{what} limited to {limit}, got {size}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid generator spec {0:?}")]
    InvalidGeneratorSpec(String),

    #[error("gnp({n}, {p}) stayed disconnected after {attempts} attempts")]
    GeneratorRetriesExhausted { n: usize, p: f64, attempts: u32 },
}
