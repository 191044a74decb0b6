use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator must be at least 2x2, got dimension {0}")]
    DimensionTooSmall(usize),

    #[error("off-diagonal intensity ({row},{col}) must be strictly positive, got {value}")]
    NonPositiveOffDiagonal { row: usize, col: usize, value: f64 },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("stationary distribution solve is numerically singular")]
    SingularSystem,

    #[error("probability weights must be finite, nonnegative, with positive mass")]
    InvalidSimplex,

    #[error("grid step {step} does not tile horizon {horizon}")]
    GridMismatch { step: f64, horizon: f64 },

    #[error("interval [{a}, {b}] is not inside [0, {horizon}]")]
    IntervalOutOfRange { a: f64, b: f64, horizon: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("distributions are not mutually absolutely continuous (zero entry)")]
    NotEquivalent,

    #[error("filter state degenerated at step {step}; grid too coarse for the SNR")]
    DegenerateState { step: usize },

    #[error("filter value has a non-positive entry at step {step}")]
    NonPositiveFilterValue { step: usize },

    #[error("normalizer vanished during Bayes reconstruction at step {step}")]
    ZeroNormalizer { step: usize },

    #[error("regression window [{t0}, {t1}] contains no grid points")]
    WindowEmpty { t0: f64, t1: f64 },

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable process exit code contract: 0 success, 1 check/bound
    /// failure, 2 config error, 3 I/O error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Parse(_) => 2,
            Error::Io(_) => 3,
            Error::Replicate { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
