use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Backend {
        context: String,
        source: swssb_core::Error,
    },
    #[error("{0} backend comparison(s) exceeded tolerance")]
    Discrepancy(usize),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 0 success, 1 backend or i/o failure, 2 validation failure, 3 backend
    /// discrepancy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Validation(_) => 2,
            CliError::Discrepancy(_) => 3,
            CliError::Backend { .. } | CliError::Output(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for swssb_core::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Backend {
            context: what.into(),
            source,
        })
    }
}
