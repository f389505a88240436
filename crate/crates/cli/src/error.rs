use thiserror::Error;

/// CLI failures, one variant per non-zero exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input text; the message cites `file:line`.
    #[error("parse error: {0}")]
    Parse(String),
    /// Inputs that parse but break an invariant or hypothesis.
    #[error("{0}")]
    Validation(String),
    /// Budgets, resolutions or data that left the computation short.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    /// Maps a library error, prefixing parse failures with their origin.
    pub fn from_lib(e: trilin::Error, origin: &str) -> Self {
        match e {
            trilin::Error::Parse { line, message } => CliError::Parse(format!("{origin}:{line}: {message}")),
            other => other.into(),
        }
    }
}

impl From<trilin::Error> for CliError {
    fn from(e: trilin::Error) -> Self {
        if let trilin::Error::Parse { .. } = e {
            CliError::Parse(e.to_string())
        } else if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Validation(format!("csv: {e}"))
    }
}
