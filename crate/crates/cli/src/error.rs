use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A required check or invariant failed.
    pub const CHECK_FAILED: i32 = 2;
    /// Usage, configuration or regime error.
    pub const CONFIG: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Library(#[from] gagliardo::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use gagliardo::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Regime(_) => exit::CONFIG,
            CliError::Io(_) => exit::IO,
            CliError::Library(e) => match e {
                E::Io(_) | E::Serialization(_) => exit::IO,
                E::Domain(_) | E::Configuration(_) | E::Regime { .. } | E::Accuracy { .. } => exit::CONFIG,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
