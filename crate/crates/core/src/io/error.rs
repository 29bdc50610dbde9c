use thiserror::Error;

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

/// Configuration and database problems. All map to exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_toml(err: &toml::de::Error, source: &str) -> Self {
        let (line, column) = match err.span() {
            Some(span) => line_column(source, span.start),
            None => (1, 1),
        };
        ConfigError::Parse {
            line,
            column,
            message: err.message().to_string(),
        }
    }
}

/// 1-based line and column of a byte offset.
fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
