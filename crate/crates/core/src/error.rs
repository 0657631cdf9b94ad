use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spin index {index} out of range for a {n_spins}-spin system")]
    SpinIndex { index: usize, n_spins: usize },

    #[error("unsupported number of spins: {0} (expected 1..=3)")]
    SpinCount(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator dimension {0} is not 2, 4 or 8")]
    Dimension(usize),

    #[error("operator is not diagonal")]
    NotDiagonal,

    #[error("operator is not hermitian")]
    NotHermitian,

    #[error("reference operator has no entry larger than the tolerance")]
    ZeroReference,

    #[error("negative evolution time {0} s")]
    NegativeTime(f64),

    #[error("function index {0} out of range 0..=255")]
    FunctionIndex(i64),

    #[error("function {0} is not balanced")]
    NotBalanced(String),

    #[error("function {0} is neither constant nor balanced; no generator sequence exists")]
    NotPromise(String),

    #[error("no quarter-turn assignment reproduces U_f for {0}")]
    SynthesisFailed(String),

    #[error("spin {0} has zero chemical shift; z-rotation cannot be realized by free evolution")]
    ZeroShift(usize),

    #[error("coupling J{0}{1} is zero; coupling evolution cannot be realized")]
    ZeroCoupling(usize, usize),

    #[error("spectral window +-{nyquist_hz} Hz does not cover lines out to {needed_hz} Hz")]
    Aliasing { needed_hz: f64, nyquist_hz: f64 },

    #[error("invalid acquisition: {0}")]
    Acquisition(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
