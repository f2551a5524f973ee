use thiserror::Error;

#[derive(Debug, Error)]
pub enum CrcError {
    #[error("{structure}: no suitable random sample found after {attempts} attempts")]
    BuildFailedSuitability { structure: &'static str, attempts: usize },
    #[error("setting {0} is not supported by this structure")]
    SettingUnsupported(String),
    #[error("query coordinate {0} is outside the supported grid")]
    QueryOutOfGrid(i64),
    #[error("malformed query: {0}")]
    QueryMalformed(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CrcError>;
