use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern must be connected")]
    Disconnected,
    #[error("pattern has {size} vertices, the limit is {cap}")]
    PatternTooLarge { size: usize, cap: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("size guardrail exceeded: {0}")]
    Guardrail(String),
    #[error("malformed counting dag: {0}")]
    Dag(String),
    #[error("integrality violated: {0}")]
    Integrality(String),
    #[error("count overflow in {0}")]
    Overflow(&'static str),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
