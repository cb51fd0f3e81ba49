//! Command-line companion to `dcsel-core`: CSV ingestion, rayon-parallel
//! drivers, and deterministic JSON/CSV reporting.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod parallel;
pub mod report;

pub use args::Cli;
pub use commands::execute;
pub use error::{CliError, Result};
pub use io::{load_csv, load_csv_all};
