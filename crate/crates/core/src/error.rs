use thiserror::Error;

use crate::tessellation::CellIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("cell {cell} is outside the {m}x{n} tessellation")]
    Index { cell: CellIndex, m: usize, n: usize },

    #[error("point ({x}, {y}) lies outside the {m}x{n} tessellation")]
    OutOfBounds { x: f64, y: f64, m: usize, n: usize },

    #[error("cells {0} and {1} are not adjacent in the grid graph")]
    NotAdjacent(CellIndex, CellIndex),

    #[error("vertex sequence is not a grid path: {0}")]
    NotAPath(String),

    #[error("Steiner graph at level {level} would have {nodes} nodes (cap {cap})")]
    LevelTooLarge {
        level: u32,
        nodes: usize,
        cap: usize,
    },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("threshold {0} is outside [0, 1/2]")]
    BadThreshold(f64),

    #[error("no qualifying corner between components {from} and {to} (traversal step {step})")]
    BridgeNotFound { from: usize, to: usize, step: usize },

    #[error("no horizontal/vertical path from {0} to {1} inside its component")]
    NoHvPath(CellIndex, CellIndex),
}
