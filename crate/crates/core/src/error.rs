use thiserror::Error;

/// Errors raised by the library. Diagnoses that are part of an operation's
/// normal answer (forest violations, inventory violations, search failure)
/// have their own types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("edge {edge} out of range for a graph with {edge_count} edges")]
    EdgeOutOfRange { edge: usize, edge_count: usize },

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid weight {0:?}")]
    InvalidWeight(String),

    #[error("negative weight on edge {edge}")]
    NegativeWeight { edge: usize },

    #[error("discipline requires edge weights")]
    MissingWeights,

    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("(G, q, s) is not achievable in {0} mode")]
    Unachievable(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("total quota {total} exceeds the enumeration bound {bound}")]
    EnumerationBound { total: usize, bound: usize },

    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),

    #[error("infeasible class sizes {0:?}")]
    InfeasibleSizes(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
