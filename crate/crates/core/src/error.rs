//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("function `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
        pos: usize,
    },
    #[error("domain error: {what}{}", if .subtree.is_empty() { String::new() } else { format!(" in `{subtree}`") })]
    Domain { what: String, subtree: String },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("frame validation failed: {0}")]
    FrameValidation(String),
    #[error("chart fold-over at s = {s:.6}: {detail}")]
    FoldOver { s: f64, detail: String },
    #[error("ODE integration failure: {0}")]
    OdeFailure(String),
    #[error("query outside tube: {0}")]
    OutOfTube(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unavailable quantity `{0}` for this catalog entry")]
    UnavailableQuantity(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
