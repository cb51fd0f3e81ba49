//! Distance-covariance kernels and the combinatorial selection algorithms
//! built on them: greedy enumeration of all inclusion-minimal maximizers of
//! a quasi-concave diversity objective, all-relevant forward selection
//! against a response, composed pipelines, and a brute-force power-set
//! oracle for exhaustive verification.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only switches float math to the standard library and implements
//! nothing else.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod data;
mod dcov;
mod diverse;
mod error;
mod fast;
mod linkage;
mod math;
mod oracle;
mod pipeline;
mod relevant;

pub use data::{ColumnSet, DCovConfig, DataMatrix};
pub use dcov::{
    augment_union, centered_distances, column_set_distance_matrix, dcor2_from_parts,
    dcov2_from_centered, distance_matrix, double_center, hadamard_mean, sample_dcor2, sample_dcov2,
    standardize, standardize_except, CenteredDistanceMatrix, SquareMatrix,
};
pub use diverse::{
    build_pi_series, combine_pi_clusters, diversity_ordering, diversity_ordering_from_cache,
    extract_pi_cluster, minimal_maximizers, DiversityTier, MinimalMaximizerResult, PiCluster,
    PiSeries,
};
pub use error::{Error, Result};
pub use fast::fast_dcov2_univariate;
pub use linkage::{build_cache, m_pi, pi_linkage, PairwiseDCovCache};
pub use oracle::{
    enumerate_m_pi, intersection_closure_check, power_set_dependence_experiment,
    quasi_concavity_check, union_decomposition_check, EnumerationResult, ScalingExperimentResult,
    MAX_ENUM_FEATURES,
};
pub use pipeline::{
    controlled_select, two_stage, PipelineConfig, PipelineMode, PipelineReport, StageReport,
};
pub use relevant::{
    complement_of, kww_forward, kww_select, kww_select_among, marginal_ranking,
    marginal_ranking_among, RelevanceRanking, RelevantSet,
};
