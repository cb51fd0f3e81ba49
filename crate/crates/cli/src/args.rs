//! Command-line surface: six subcommands over a shared flag set.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dcsel",
    version,
    about = "Distance-covariance feature selection: relevance, diversity, and exhaustive verification over CSV data",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print ν̂² and ρ̂² between two column groups
    Dcov {
        #[command(flatten)]
        common: CommonOpts,
        /// Left column group, comma-separated names or 0-based indices
        /// (default: every non-response column)
        #[arg(long, value_name = "COLS")]
        a: Option<String>,
        /// Right column group (default: the --response columns)
        #[arg(long, value_name = "COLS")]
        b: Option<String>,
    },
    /// Enumerate all inclusion-minimal maximizers of the diversity objective
    Diverse {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// All-relevant forward selection against the response
    Relevant {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Combined relevance/diversity pipelines
    Select {
        #[command(flatten)]
        common: CommonOpts,
        /// Pipeline to run
        #[arg(long, value_enum, value_name = "MODE")]
        mode: ModeArg,
        /// Marginal ρ̂² threshold; required by (and only valid for) controlled mode
        #[arg(long, value_name = "A")]
        alpha: Option<f64>,
    },
    /// Diversity ordering of all features by iterated peeling
    Order {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exhaustive power-set tools (guarded to at most 20 features)
    Enumerate {
        #[command(flatten)]
        common: CommonOpts,
        /// mpi: brute-force enumeration of the diversity objective;
        /// scaling: ρ(ρ_E, ν_E) over all feature subsets, raw and standardized
        #[arg(long, value_enum, default_value_t = ExperimentArg::Mpi, value_name = "EXP")]
        experiment: ExperimentArg,
    },
}

impl Command {
    pub fn common(&self) -> &CommonOpts {
        match self {
            Command::Dcov { common, .. }
            | Command::Diverse { common }
            | Command::Relevant { common }
            | Command::Select { common, .. }
            | Command::Order { common }
            | Command::Enumerate { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Dcov { .. } => "dcov",
            Command::Diverse { .. } => "diverse",
            Command::Relevant { .. } => "relevant",
            Command::Select { .. } => "select",
            Command::Order { .. } => "order",
            Command::Enumerate { .. } => "enumerate",
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Input CSV file; the first row must be a header
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Response column(s): comma-separated names or 0-based indices
    #[arg(long, value_name = "COLS")]
    pub response: Option<String>,

    /// Distance exponent in (0, 2]; 2 uses squared Euclidean distances
    #[arg(long, default_value_t = 1.0, value_name = "EXP")]
    pub exponent: f64,

    /// Standardize feature columns (zero mean, unit variance) before
    /// computing kernels; use --standardize=false to disable
    #[arg(
        long,
        default_value_t = true,
        num_args = 0..=1,
        require_equals = true,
        default_missing_value = "true",
        action = clap::ArgAction::Set,
        value_name = "BOOL"
    )]
    pub standardize: bool,

    /// Output encoding; csv covers flat tables (dcov, relevant, order) only
    #[arg(long, value_enum, default_value_t = FormatArg::Json, value_name = "FMT")]
    pub format: FormatArg,

    /// Truncate ranked or tiered output lists to the first K entries
    #[arg(long, value_name = "K")]
    pub top_k: Option<usize>,

    /// Worker threads for cache construction and series fan-out (0 = auto)
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,

    /// Drop the timing section so identical inputs give byte-identical output
    #[arg(long, default_value_t = false)]
    pub omit_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Marginal ρ̂² filter at --alpha, then diverse selection
    Controlled,
    /// All-relevant selection, then diverse selection among survivors
    #[value(alias = "kww_then_diverse")]
    KwwThenDiverse,
    /// Diverse selection, then all-relevant selection within the union
    #[value(alias = "diverse_then_kww")]
    DiverseThenKww,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    Mpi,
    Scaling,
}
