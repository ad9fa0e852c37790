use thiserror::Error;

use crate::grid::CellIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("grid dimensions must be positive (got {width}x{height}, cell size {cell_size})")]
    Dimension {
        width: u32,
        height: u32,
        cell_size: f64,
    },

    #[error("cell {cell} is outside the {width}x{height} grid")]
    OutOfBounds {
        cell: CellIndex,
        width: u32,
        height: u32,
    },

    #[error("cell {0} was assigned more than once")]
    Conflict(CellIndex),

    #[error("malformed mask: {0}")]
    Shape(String),

    #[error("unknown mask character {ch:?} at row {row}, column {column}")]
    Alphabet { ch: char, row: usize, column: usize },

    #[error("covariance is not symmetric positive definite: {0}")]
    Matrix(String),

    #[error("thresholds must satisfy high > medium > low > 0 (got {high}, {medium}, {low})")]
    Threshold { high: f64, medium: f64, low: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid trajectory: {0}")]
    Trajectory(String),

    #[error("energy ledger overspent: spent {spent} of {start}")]
    Ledger { spent: i64, start: i64 },

    #[error("instance exceeds enumeration cap: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, PlanError>;
