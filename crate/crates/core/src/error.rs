use thiserror::Error;

use crate::split_catalog::LatencyClass;
use crate::topology::RanFunction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A geometric input is outside its physical domain.
    #[error("geometry domain error: {0}")]
    Domain(String),

    #[error("unknown function split id {0} (expected 1..=10)")]
    UnknownSplit(u8),

    #[error("split {split} does not publish a {use_case} latency class")]
    UseCaseUndefined { split: u8, use_case: LatencyClass },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function {0} is not placed in this topology")]
    UnplacedFunction(RanFunction),

    #[error("no route between {from} and {to}")]
    Unroutable { from: String, to: String },

    #[error("procedure catalog is invalid: {0}")]
    InvalidCatalog(String),

    #[error("dependency cycle through step {0}")]
    CyclicDependencies(String),

    #[error("report is missing cell {0}")]
    MissingCell(String),

    #[error("unsupported output format {0:?}")]
    UnsupportedFormat(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
