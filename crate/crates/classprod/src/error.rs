use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("core: {0:?}")]
    Core(classprod_core::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error at {}: {source}", path.display())]
    IoAt {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("checksum mismatch for {name}: want {want}, got {got}")]
    Checksum {
        name: String,
        want: String,
        got: String,
    },
    #[error("scenario '{0}': {1}")]
    Scenario(String, String),
    #[error("usage: {0}")]
    Usage(String),
}

impl From<classprod_core::Error> for AppError {
    fn from(e: classprod_core::Error) -> Self {
        AppError::Core(e)
    }
}
