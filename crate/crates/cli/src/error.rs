use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("size guard exceeded for {what}: {size} > {limit}")]
    Guard { what: String, size: u128, limit: u128 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Core(reslie_core::Error),
}

impl CliError {
    /// 2 for rejected input, 3 for size guards, 4 for invariant failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Schema(_) | CliError::Io { .. } => 2,
            CliError::Guard { .. } => 3,
            CliError::Invariant(_) => 4,
            CliError::Core(e) => match e {
                reslie_core::Error::SizeGuard { .. } | reslie_core::Error::FieldTooLarge { .. } => 3,
                reslie_core::Error::Invariant(_) => 4,
                _ => 2,
            },
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: &str, e: serde_json::Error) -> CliError {
        CliError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rsplit_once(" at line ") {
        Some((head, _)) => head.to_string(),
        None => msg.to_string(),
    }
}

impl From<reslie_core::Error> for CliError {
    fn from(e: reslie_core::Error) -> Self {
        match e {
            reslie_core::Error::SizeGuard { what, size, limit } => CliError::Guard {
                what: what.to_string(),
                size,
                limit,
            },
            other => CliError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
