use std::fmt;

use num_bigint::BigUint;

/// A single broken constraint found while validating a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Entry outside `[0, c]`. Coordinates are 1-based.
    OutOfRange { row: usize, col: usize, value: i64 },
    /// `z[row][col] < z[row][col + 1]`.
    RowIncrease { row: usize, col: usize },
    /// `z[row][col] < z[row + 1][col]`.
    ColumnIncrease { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::OutOfRange { row, col, value } => {
                write!(f, "OutOfRange at ({row},{col}): value {value}")
            }
            Violation::RowIncrease { row, col } => write!(
                f,
                "MonotonicityViolation in row {row}: ({row},{col}) < ({row},{})",
                col + 1
            ),
            Violation::ColumnIncrease { row, col } => write!(
                f,
                "MonotonicityViolation in column {col}: ({row},{col}) < ({},{col})",
                row + 1
            ),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid box dimensions: {0}")]
    InvalidDims(String),
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {found}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        found: String,
    },
    #[error("invalid plane partition: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("diagonal index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },
    #[error("enumeration cap exceeded: {predicted} partitions > cap {cap}")]
    CapExceeded { predicted: BigUint, cap: u64 },
    #[error("budget exceeded: {needed} > {budget} ({what})")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("nonzero remainder dividing by {divisor}")]
    NonzeroRemainder { divisor: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal arithmetic error: {0}")]
    Internal(String),
    #[error("no coalescence after {ticks} ticks (seed {seed:#x})")]
    NoCoalescence { ticks: u64, seed: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
