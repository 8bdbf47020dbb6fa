use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature point count must be in 1..={cap}, got {requested}")]
    PointCount { requested: usize, cap: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("objective failed at {point:?}: {message}")]
    Objective { point: Vec<f64>, message: String },

    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },

    #[error("directions are not orthonormal (Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("vector has zero norm")]
    ZeroNorm,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[cfg(feature = "harness")]
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[cfg(feature = "harness")]
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[cfg(feature = "harness")]
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[cfg(feature = "harness")]
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
