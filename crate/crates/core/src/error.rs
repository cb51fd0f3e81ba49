use alloc::string::String;
use core::fmt;

/// Errors surfaced by the selection kernels and drivers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer than two samples (rows) were supplied.
    NotEnoughRows { rows: usize },
    /// A matrix with zero columns was supplied.
    NoColumns,
    /// A NaN or infinite entry at the given row/column.
    NonFiniteValue { row: usize, col: usize },
    /// A row with a different number of cells than the first row.
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    /// Two columns share the same name.
    DuplicateColumnName { name: String },
    /// Column names do not align with the number of columns.
    NameCountMismatch { names: usize, cols: usize },
    /// Distance exponent outside (0, 2].
    InvalidExponent { value: f64 },
    /// Negative comparison tolerance.
    InvalidTolerance { value: f64 },
    /// Matrix entries do not form a square matrix.
    NotSquare { len: usize, rows: usize },
    /// A pairwise cache matrix that is not exactly symmetric.
    AsymmetricCache { i: usize, j: usize },
    /// A column set was empty where at least one column is required.
    EmptyColumnSet,
    /// A column index appears more than once in a column set.
    DuplicateColumnIndex { index: usize },
    /// A column index is out of range for the matrix it addresses.
    ColumnOutOfRange { index: usize, columns: usize },
    /// Two column sets overlap where they must be disjoint.
    OverlappingColumnSets { index: usize },
    /// The element passed to the linkage already belongs to the set.
    LinkageMemberInSet { index: usize },
    /// The objective is undefined on the full ground set.
    FullGroundSet,
    /// An operation needs more features than were available.
    NotEnoughFeatures { needed: usize, got: usize },
    /// The fast univariate path only supports exponent 1.
    ExponentNotOne { value: f64 },
    /// Paired inputs of different lengths.
    LengthMismatch { left: usize, right: usize },
    /// Exhaustive enumeration refused: feature count above the hard cap.
    SizeGuard { features: usize, max: usize },
    /// A pipeline stage left too few features for the next stage.
    EmptyStage {
        stage: &'static str,
        needed: usize,
        got: usize,
    },
    /// Controlled mode requires an alpha threshold.
    MissingAlpha,
    /// Alpha must be a finite nonnegative real.
    InvalidAlpha { value: f64 },
    /// Alpha supplied to a mode that does not consume it.
    UnexpectedAlpha,
    /// The pipeline mode does not match the entry point called.
    InvalidMode { expected: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotEnoughRows { rows } => {
                write!(f, "need at least 2 rows, got {rows}")
            }
            Error::NoColumns => write!(f, "matrix has no columns"),
            Error::RaggedRow { row, expected, got } => {
                write!(f, "row {row} has {got} cells, expected {expected}")
            }
            Error::NonFiniteValue { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::DuplicateColumnName { name } => {
                write!(f, "duplicate column name: {name}")
            }
            Error::NameCountMismatch { names, cols } => {
                write!(f, "{names} column names for {cols} columns")
            }
            Error::InvalidExponent { value } => {
                write!(f, "distance exponent must lie in (0, 2], got {value}")
            }
            Error::InvalidTolerance { value } => {
                write!(f, "comparison tolerance must be nonnegative, got {value}")
            }
            Error::NotSquare { len, rows } => {
                write!(f, "{len} entries do not form a {rows}x{rows} matrix")
            }
            Error::AsymmetricCache { i, j } => {
                write!(f, "cache matrix not symmetric at ({i}, {j})")
            }
            Error::EmptyColumnSet => write!(f, "column set is empty"),
            Error::DuplicateColumnIndex { index } => {
                write!(f, "column index {index} appears more than once")
            }
            Error::ColumnOutOfRange { index, columns } => {
                write!(f, "column index {index} out of range for {columns} columns")
            }
            Error::OverlappingColumnSets { index } => {
                write!(f, "column sets overlap at index {index}")
            }
            Error::LinkageMemberInSet { index } => {
                write!(f, "feature {index} is already a member of the set")
            }
            Error::FullGroundSet => {
                write!(f, "objective is undefined on the full ground set")
            }
            Error::NotEnoughFeatures { needed, got } => {
                write!(f, "need at least {needed} features, got {got}")
            }
            Error::ExponentNotOne { value } => {
                write!(f, "fast univariate path requires exponent 1, got {value}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "paired inputs of different lengths: {left} vs {right}")
            }
            Error::SizeGuard { features, max } => {
                write!(
                    f,
                    "exhaustive enumeration over {features} features exceeds the cap of {max}"
                )
            }
            Error::EmptyStage { stage, needed, got } => {
                write!(
                    f,
                    "stage '{stage}' left {got} features but the next stage needs {needed}"
                )
            }
            Error::MissingAlpha => write!(f, "controlled mode requires --alpha"),
            Error::InvalidAlpha { value } => {
                write!(f, "alpha must be a finite nonnegative real, got {value}")
            }
            Error::UnexpectedAlpha => {
                write!(f, "alpha is only meaningful in controlled mode")
            }
            Error::InvalidMode { expected } => {
                write!(
                    f,
                    "pipeline mode mismatch: this entry point expects {expected}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
