use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("undefined minimum distance: {0}")]
    Undefined(String),
    #[error("classical code not admissible for lifting: {0}")]
    Inadmissible(String),
    #[error("generator orbits collide: {0}")]
    OrbitCollision(String),
    #[error("degenerate detection pattern: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
