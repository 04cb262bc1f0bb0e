use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("{n} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop on vertex {0}")]
    Loop(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("deck modes differ ({left} vs {right})")]
    DeckModeMismatch {
        left: &'static str,
        right: &'static str,
    },
    #[error("graphs have different vertex counts ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("no isomorphism with fixed point {vertex} between the two neighborhoods")]
    NoFixedPointIsomorphism { vertex: usize },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("no crossing of the entropy ratio through 1 for n = {n}")]
    NoCrossover { n: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
