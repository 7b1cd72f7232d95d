use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    /// Malformed text; line and column are 1-based.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed text whose content is inconsistent.
    #[error("line {line}: {message}")]
    Content { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] pi_core::Error),
}

impl FormatError {
    pub(crate) fn from_json(e: serde_json::Error, line_offset: usize) -> Self {
        FormatError::Syntax {
            line: e.line() + line_offset,
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;
