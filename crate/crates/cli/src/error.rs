use thiserror::Error;

/// Errors carry their exit code: input problems exit 2, mathematical
/// failures exit 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn math(msg: impl std::fmt::Display) -> Self {
        CliError::Math(msg.to_string())
    }
}
