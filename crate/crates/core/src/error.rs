use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero column {0} in sensing matrix")]
    ZeroColumn(usize),

    #[error("infeasible object placement: {0}")]
    InfeasibleSeparation(String),

    #[error("source outside grid extent: position {position} not in [0, {extent})")]
    SourceOutsideGrid { position: f64, extent: f64 },

    #[error("config error on line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
