use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] fracmp::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit code: validation problems are 1, everything else 2.
    pub fn exit_code(&self) -> u8 {
        use fracmp::Error as E;
        match self {
            CliError::Config(_) => 1,
            CliError::Core(E::PathCollapse(_) | E::Linear(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Io { .. } | CliError::Csv(_) => 2,
        }
    }
}
