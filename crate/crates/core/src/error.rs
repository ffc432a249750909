//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid material parameters: {0}")]
    InvalidMaterial(String),

    #[error("invalid gas state: {0}")]
    InvalidGasState(String),

    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),

    #[error("capacity exceeded on {axis}: |{value}| > {limit}")]
    CapacityExceeded {
        axis: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("insufficient excitation: axes {axes:?} carry no signal")]
    InsufficientExcitation { axes: Vec<&'static str> },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("degenerate sensitivity: fitted scalar {scalar} = {value} is below tolerance")]
    DegenerateSensitivity { scalar: &'static str, value: f64 },

    #[error("decoupler has no baseline; call tare first")]
    NotTared,

    #[error("tare window contains no samples")]
    EmptyTareWindow,

    #[error("too few load cycles: need at least {needed}, found {got}")]
    TooFewCycles { needed: usize, got: usize },

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("loading and unloading branches do not overlap in reference force")]
    NonOverlappingBranches,

    #[error("reference series is identically zero")]
    AllZeroReference,

    #[error("input series is constant; cannot identify dynamics")]
    ConstantInput,

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("series length mismatch: {left} vs {right}")]
    MismatchedLengths { left: usize, right: usize },

    #[error("CSV error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
