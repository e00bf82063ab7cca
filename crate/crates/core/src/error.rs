use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: i64, b: i64 },
    #[error("invalid modular setup: {0}")]
    Setup(String),
    #[error("denominator {k} exceeds the cap {cap} for {knot} (m = {m})")]
    CapExceeded { knot: String, m: usize, k: i64, cap: i64 },
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("too close to a pole: {0}")]
    Pole(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
