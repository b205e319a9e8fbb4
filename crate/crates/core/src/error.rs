use thiserror::Error;

use crate::complex::CellId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("points {0} and {1} share a position")]
    DuplicatePosition(u32, u32),
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("frame {0} has no points")]
    EmptyFrame(usize),
    #[error("trajectories {a} and {b} collide at frame {frame}")]
    PositionCollision { frame: usize, a: u32, b: u32 },
    #[error("inconsistent support: {0}")]
    InconsistentSupport(String),
    #[error("color {0} is not used by any trajectory")]
    UnknownColor(u32),
    #[error("cell {id} has no image in the ambient medusa: {reason}")]
    UnmappableCell { id: CellId, reason: String },
    #[error("unsupported inclusion: {0}")]
    UnsupportedInclusion(String),
    #[error("incompatible inclusion: {0}")]
    IncompatibleInclusion(String),
    #[error("invalid medusa: {0}")]
    InvalidMedusa(String),
    #[error("instance too large for the oracle: {cells} cells (limit {limit})")]
    TooLarge { cells: usize, limit: usize },
    #[error("negative multiplicity {value} at ({birth},{death}) in dimension {dim}")]
    NegativeMultiplicity { dim: usize, birth: usize, death: usize, value: i64 },
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 1 for malformed input, 2 for a failed
    /// verification, 3 for an unsupported inclusion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 2,
            Error::UnsupportedInclusion(_) => 3,
            _ => 1,
        }
    }
}
