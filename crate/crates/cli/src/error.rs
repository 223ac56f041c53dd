use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Compute {
        context: String,
        #[source]
        source: rydcav::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} validation check(s) failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            // an unwritable output directory violates the run configuration
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Compute { .. } => 3,
            CliError::Validation(_) => 4,
        }
    }
}

/// Attaches a description of the failing step to core errors.
pub trait Context<T> {
    fn context(self, what: &str) -> Result<T, CliError>;
}

impl<T> Context<T> for rydcav::Result<T> {
    fn context(self, what: &str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Compute {
            context: what.to_string(),
            source,
        })
    }
}
