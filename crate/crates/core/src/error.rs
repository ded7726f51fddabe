use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("arity mismatch for {name}: declared {expected}, used with {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("unknown definition {0}")]
    UnknownDef(String),
    #[error("malformed recursive definition {name}: {reason}")]
    Shape { name: String, reason: String },
    #[error("expression is not closed: free {0}")]
    Open(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("chain bounds are not strictly increasing")]
    ChainOrder,
    #[error("horizon {horizon} does not exceed last change point {last}")]
    Horizon { horizon: u64, last: u64 },
    #[error("substitution: {0}")]
    Substitution(String),
    #[error("illegal move: {0}")]
    Move(String),
    #[error("world: {0}")]
    World(String),
    #[error("script: {0}")]
    Script(String),
    #[error("too many letters for a truth table ({0})")]
    TooManyLetters(usize),
    #[error("matching does not yield a tautology")]
    NotAccepting,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
