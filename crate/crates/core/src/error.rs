use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("non-homogeneous input: term at position {pos} has degree {found}, expected {expected}")]
    NonHomogeneous { expected: u32, found: u32, pos: usize },

    #[error("mismatched number of variables: {left} vs {right}")]
    VariableCount { left: usize, right: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unstable Hilbert data at degree cap {cap}")]
    UnstableHilbert { cap: u32 },

    #[error("inconclusive certificate: {0}")]
    Inconclusive(String),

    #[error("retries exhausted at step t={step}; last dimension estimates: {last_dims}")]
    RetriesExhausted { step: usize, last_dims: String },

    #[error("all {samples} t-substitution samples were degenerate")]
    DegenerateSamples { samples: usize },

    #[error("chow weight routes disagree: combinatorial {combinatorial}, substitution {substitution}")]
    ChowRouteDisagreement { combinatorial: i64, substitution: i64 },

    #[error("quadrature did not converge with {nodes} nodes: last estimates {last} and {previous}")]
    NonConvergence { nodes: usize, last: f64, previous: f64 },

    #[error("winding integral {value} is not within 0.1 of an integer")]
    WindingNotInteger { value: f64 },

    #[error("unsupported expression: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
