use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    /// The request is well formed but would exceed a configured enumeration ceiling.
    #[error("refused: {what} = {requested} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded {
        what: &'static str,
        requested: usize,
        ceiling: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

pub(crate) fn ensure_ceiling(what: &'static str, requested: usize, ceiling: usize) -> Result<()> {
    if requested > ceiling {
        Err(LabError::CeilingExceeded {
            what,
            requested,
            ceiling,
        })
    } else {
        Ok(())
    }
}
