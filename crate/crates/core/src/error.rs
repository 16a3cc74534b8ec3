use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: negative coefficient")]
    NegativeCoefficient { line: usize, column: usize },
    #[error("reaction {reaction} has identical reactant and product complex")]
    LoopReaction { reaction: String },
    #[error("duplicate reaction {reaction}")]
    DuplicateReaction { reaction: String },
    #[error("network has no reactions")]
    EmptyNetwork,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("blocks overlap: a covering was given where a partition is required")]
    CoveringNotPartition,
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
    #[error("decomposition is not a C*-decomposition")]
    NotCStar,
    #[error("reaction {reaction} has exactly one endpoint in the stoichiometric subspace")]
    MixedSReaction { reaction: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid realization choice: {0}")]
    InvalidChoice(String),
    #[error("invalid kinetics: {0}")]
    InvalidKinetics(String),
    #[error("state must be strictly positive (component {0})")]
    NonpositiveState(usize),
    #[error("network is not species decomposable")]
    NotSpeciesDecomposable,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
