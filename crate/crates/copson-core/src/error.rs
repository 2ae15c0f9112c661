use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence error: {0}")]
    Sequence(String),
    #[error("spec is not summable: {0}")]
    NonSummable(String),
    #[error("tail sums unavailable: {0} requires a summable weight sequence")]
    MissingTail(&'static str),
    #[error("length mismatch: lambda has {lambda} terms, x has {x}")]
    LengthMismatch { lambda: usize, x: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("power iteration did not converge after {iters} iterations (last gap {gap:e})")]
    NoConvergence { iters: usize, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
