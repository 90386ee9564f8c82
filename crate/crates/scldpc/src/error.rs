use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("component matrices do not sum to the block base matrix")]
    SumMismatch,
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("unknown ensemble `{0}` (expected B24, C24, B36, C36ms1, C36ms2, or a file path)")]
    UnknownEnsemble(String),
    #[error("subspace enumeration infeasible for m = {0} (supported up to m = 4)")]
    TooLarge(u32),
    #[error("bad bisection bracket: {0}")]
    BadBracket(String),
    #[error("no window size up to {0} met the threshold criterion")]
    NotFoundWithinCap(usize),
    #[error("operating point `{0}` carries no threshold result")]
    MissingThreshold(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
