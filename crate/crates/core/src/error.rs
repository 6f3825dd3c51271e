use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ChaosError>;

#[derive(Debug, Error)]
pub enum ChaosError {
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error("objects live on different partitions")]
    PartitionMismatch,
    #[error("partition is not a refinement of the source partition")]
    NotNested,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid cell index {cell} (partition has {cells} cells)")]
    CellOutOfRange { cell: usize, cells: usize },
    #[error("contraction order out of range: r={r}, l={l} for degrees {m} and {n}")]
    ContractionOrder { r: usize, l: usize, m: usize, n: usize },
    #[error("product degree {needed} exceeds degree cap {cap}")]
    DegreeCapExceeded { cap: usize, needed: usize },
    #[error("time {0} is not a point of the partition")]
    NotOnGrid(f64),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("invalid configuration value for `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
