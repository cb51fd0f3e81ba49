//! CLI-level errors and the process exit-code contract.
//!
//! Exit codes: 0 success, 2 usage error (bad flags or flag values),
//! 3 data error (files, CSV contents, column references, algorithm
//! preconditions), 4 size-guard violation.

use std::fmt;

use dcsel_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Any error surfaced by the library layer.
    Core(CoreError),
    /// File could not be opened or read.
    Io {
        path: String,
        source: std::io::Error,
    },
    /// Malformed CSV (quoting, encoding, ...).
    Csv { path: String, message: String },
    /// A record with a different number of fields than the header.
    RaggedRecord {
        path: String,
        line: u64,
        expected: usize,
        got: usize,
    },
    /// A cell that does not parse as a finite number.
    NonNumericCell {
        path: String,
        line: u64,
        column: String,
        value: String,
    },
    /// Empty or missing header row.
    MissingHeader { path: String },
    /// Two header cells with the same name.
    DuplicateHeader { path: String, name: String },
    /// Fewer than two data rows.
    TooFewRows { path: String, rows: usize },
    /// A --response/--a/--b token that is neither a column name nor a
    /// valid 0-based column index.
    UnknownColumn { name: String },
    /// The same column referenced twice in one list.
    DuplicateColumn { name: String },
    /// --response named every column, leaving no features.
    NoFeaturesLeft,
    /// An empty column list where at least one column is required.
    EmptyColumnList { flag: &'static str },
    /// A required flag is absent for this subcommand.
    MissingFlag {
        flag: &'static str,
        why: &'static str,
    },
    /// --format csv requested for a command whose report is not a flat table.
    CsvFormatUnsupported { command: &'static str },
}

impl CliError {
    /// The documented process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                CoreError::SizeGuard { .. } => 4,
                CoreError::InvalidExponent { .. }
                | CoreError::InvalidTolerance { .. }
                | CoreError::MissingAlpha
                | CoreError::InvalidAlpha { .. }
                | CoreError::UnexpectedAlpha
                | CoreError::InvalidMode { .. } => 2,
                _ => 3,
            },
            CliError::MissingFlag { .. } | CliError::CsvFormatUnsupported { .. } => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "cannot read {path}: {source}"),
            CliError::Csv { path, message } => write!(f, "malformed CSV in {path}: {message}"),
            CliError::RaggedRecord {
                path,
                line,
                expected,
                got,
            } => write!(
                f,
                "{path}: line {line} has {got} fields, header has {expected}"
            ),
            CliError::NonNumericCell {
                path,
                line,
                column,
                value,
            } => write!(
                f,
                "{path}: line {line}, column '{column}': '{value}' is not a finite number"
            ),
            CliError::MissingHeader { path } => {
                write!(f, "{path}: missing or empty header row")
            }
            CliError::DuplicateHeader { path, name } => {
                write!(f, "{path}: duplicate column name '{name}' in header")
            }
            CliError::TooFewRows { path, rows } => {
                write!(f, "{path}: found {rows} data rows, need at least 2")
            }
            CliError::UnknownColumn { name } => {
                write!(f, "unknown column '{name}' (not a header name or 0-based index)")
            }
            CliError::DuplicateColumn { name } => {
                write!(f, "column '{name}' referenced more than once")
            }
            CliError::NoFeaturesLeft => {
                write!(f, "--response consumed every column; no feature columns remain")
            }
            CliError::EmptyColumnList { flag } => {
                write!(f, "{flag} must name at least one column")
            }
            CliError::MissingFlag { flag, why } => write!(f, "{flag} is required: {why}"),
            CliError::CsvFormatUnsupported { command } => write!(
                f,
                "--format csv only covers flat tables; '{command}' reports nested structure, use --format json"
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

pub type Result<T> = core::result::Result<T, CliError>;
