use std::path::PathBuf;

use serde::Serialize;

/// Failure of a command, grouped by the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid option: {0}")]
    Validation(String),
    #[error(transparent)]
    Numeric(#[from] lcu_core::Error),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: i32,
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Schema(_) => 5,
            CliError::Validation(_) => 6,
            CliError::Numeric(_) => 7,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Schema(_) => "schema",
            CliError::Validation(_) => "validation",
            CliError::Numeric(e) => e.kind(),
        }
    }

    /// Single-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        let report = ErrorReport {
            error: ErrorBody {
                code: self.exit_code(),
                kind: self.kind(),
                message: self.to_string(),
            },
        };
        serde_json::to_string(&report).expect("error report serialises")
    }
}
