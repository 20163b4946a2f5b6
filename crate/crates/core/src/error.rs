use thiserror::Error;

/// Errors raised by kernel evaluation, surface construction and functional evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested accuracy could not be reached; `best` is the best available estimate.
    #[error("accuracy error: {message} (best estimate {best:e})")]
    Accuracy { message: String, best: f64 },
    /// Invalid construction parameters (resolution, semiaxes, sample counts, ...).
    #[error("configuration error: {0}")]
    Configuration(String),
    /// The Helmholtz parameter is too large for the node spacing of the surface grid.
    #[error("regime error: a = {a} exceeds a_max = {a_max} at resolution {resolution}")]
    Regime { a: f64, a_max: f64, resolution: usize },
    #[error("serialization error: {0}")]
    Serialization(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
