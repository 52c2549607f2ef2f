use thiserror::Error;

/// Everything that can go wrong between reading an instance and emitting a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("duplicate identifier `{name}` at line {line}, column {column}")]
    DuplicateIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("domain {kind} `{name}` is not mapped")]
    Unmapped { kind: &'static str, name: String },

    #[error("section `{found}` out of order at line {line} (expected {expected})")]
    SectionOrder {
        found: String,
        expected: String,
        line: usize,
    },

    #[error("edge `{edge}` does not map onto an edge joining the images of its endpoints")]
    EndpointMismatch { edge: String },

    #[error("edges `{first}` and `{second}` coincide under the map (same image, same endpoints)")]
    CoincidentEdges { first: String, second: String },

    #[error("order collection is not admissible: edges `{first}` and `{second}` conflict")]
    Inadmissible { first: String, second: String },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("Γ_f is undefined: the pair covering p2 is nontrivial")]
    GammaUndefined,

    #[error("oracle bound exceeded: {needed} order collections > bound {bound}")]
    BoundExceeded { needed: u128, bound: u128 },

    #[error("shape violation: {0}")]
    Shape(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
