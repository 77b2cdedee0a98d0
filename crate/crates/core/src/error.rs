use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("physical metric is singular at x = {x}")]
    Singular { x: f64 },
    #[error("model inconsistency: {0}")]
    Model(String),
    #[error("series: {0}")]
    Series(String),
    #[error("extraction failed: {msg}")]
    Extraction { msg: String, table: Vec<Vec<f64>> },
    #[error("configuration: {0}")]
    Config(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("resolution: {0}")]
    Resolution(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("degenerate surface: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
