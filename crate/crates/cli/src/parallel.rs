//! Rayon-parallel front-ends for the expensive library paths.
//!
//! Parallelism never changes a result here: each cache entry and each
//! π-series is computed by the same sequential kernel the library uses, in
//! a self-contained unit of work, so the assembled outputs are bit-for-bit
//! identical to the serial functions. The tests below assert exactly that.

use dcsel_core::{
    build_pi_series, centered_distances, combine_pi_clusters, dcov2_from_centered,
    extract_pi_cluster, ColumnSet, DCovConfig, DataMatrix, DiversityTier, Error as CoreError,
    MinimalMaximizerResult, PairwiseDCovCache,
};
use rayon::prelude::*;

use crate::error::Result;

/// Parallel pairwise ν̂² cache; entries match `dcsel_core::build_cache`
/// bit for bit.
pub fn build_cache_parallel(
    data: &DataMatrix,
    features: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<PairwiseDCovCache> {
    cfg.validate()?;
    features.check_within(data.n_cols())?;
    let m = features.len();
    if m < 2 {
        return Err(CoreError::NotEnoughFeatures { needed: 2, got: m }.into());
    }
    let names: Vec<String> = features.iter().map(|&j| data.name(j).to_owned()).collect();

    let centered = features
        .as_slice()
        .par_iter()
        .map(|&col| centered_distances(data, &ColumnSet::single(col), cfg.exponent))
        .collect::<core::result::Result<Vec<_>, _>>()?;

    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| dcov2_from_centered(&centered[i], &centered[j]))
        .collect::<core::result::Result<Vec<f64>, _>>()?;

    let mut matrix = vec![0.0; m * m];
    for (&(i, j), &v) in pairs.iter().zip(values.iter()) {
        matrix[i * m + j] = v;
        matrix[j * m + i] = v;
    }
    Ok(PairwiseDCovCache::from_matrix(matrix, names, cfg.eps)?)
}

/// Parallel π-series fan-out (one series per start), then the usual serial
/// combination; matches `dcsel_core::minimal_maximizers` exactly.
pub fn minimal_maximizers_parallel(cache: &PairwiseDCovCache) -> Result<MinimalMaximizerResult> {
    let p = cache.p();
    if p < 2 {
        return Err(CoreError::NotEnoughFeatures { needed: 2, got: p }.into());
    }
    let clusters = (0..p)
        .into_par_iter()
        .map(|start| {
            let series = build_pi_series(start, cache)?;
            extract_pi_cluster(&series, cache)
        })
        .collect::<core::result::Result<Vec<_>, _>>()?;
    Ok(combine_pi_clusters(clusters, cache.eps())?)
}

/// Peeling with the parallel inner step; matches
/// `dcsel_core::diversity_ordering_from_cache` exactly.
pub fn diversity_ordering_parallel(cache: &PairwiseDCovCache) -> Result<Vec<DiversityTier>> {
    let p = cache.p();
    if p < 2 {
        return Err(CoreError::NotEnoughFeatures { needed: 2, got: p }.into());
    }
    let mut remaining: Vec<usize> = (0..p).collect();
    let mut tiers = Vec::new();
    while remaining.len() >= 2 {
        let sub = cache.restrict(&remaining)?;
        let result = minimal_maximizers_parallel(&sub)?;
        let mut tier_members: Vec<usize> = Vec::new();
        for cluster in &result.clusters {
            for &local in cluster.members.iter() {
                let original = remaining[local];
                if !tier_members.contains(&original) {
                    tier_members.push(original);
                }
            }
        }
        tier_members.sort_unstable();
        remaining.retain(|idx| !tier_members.contains(idx));
        tiers.push(DiversityTier {
            features: ColumnSet::new(tier_members)?,
            objective: Some(result.objective),
        });
    }
    if !remaining.is_empty() {
        tiers.push(DiversityTier {
            features: ColumnSet::new(remaining)?,
            objective: None,
        });
    }
    Ok(tiers)
}
