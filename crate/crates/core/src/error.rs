use thiserror::Error;

/// Errors produced by the analysis, simulation and benchmark layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("singular gain: {0}")]
    Singular(String),
    #[error("observation is impossible under the speaker model: {0}")]
    Inconsistent(String),
    #[error("analysis failed: {0}")]
    Analysis(String),
    #[error("environment generation failed for seed {seed}: {reason}")]
    Generation { seed: u64, reason: String },
    #[error("cannot compare conditions: {0}")]
    Comparison(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
