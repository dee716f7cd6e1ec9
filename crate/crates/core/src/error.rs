use thiserror::Error;

/// Errors produced by the library. The three non-IO classes map onto the CLI
/// exit codes: validation (2), numerical/singular (3), resource cap (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    pub fn resource_cap(msg: impl Into<String>) -> Self {
        Error::ResourceCap(msg.into())
    }
}
