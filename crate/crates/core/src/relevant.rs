//! All-relevant forward selection: rank features by marginal distance
//! correlation with the response, then grow the selected set while the
//! joint distance covariance with the response does not decrease. The stop
//! is a strict first-failure stop — the first rejected candidate ends the
//! pass; later candidates are never revisited.

use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::dcov::{centered_distances, dcor2_from_parts, dcov2_from_centered, standardize_except};
use crate::error::{Error, Result};
use crate::math;

/// Features sorted by marginal ρ̂²(X_i, Y), strongest first; ties go to the
/// lower feature index.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceRanking {
    /// (feature column index, marginal ρ̂²) pairs, weakly decreasing.
    pub ranked: Vec<(usize, f64)>,
}

/// Outcome of the forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevantSet {
    /// Accepted features, a prefix of the ranking in ranking order.
    pub selected: ColumnSet,
    /// ν̂(X_s, Y) after each accepted addition; weakly increasing.
    pub dcov_trace: Vec<f64>,
}

fn check_candidates(data: &DataMatrix, candidates: &ColumnSet, response: &ColumnSet) -> Result<()> {
    candidates.check_within(data.n_cols())?;
    response.check_within(data.n_cols())?;
    if response.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    if candidates.is_empty() {
        return Err(Error::NotEnoughFeatures { needed: 1, got: 0 });
    }
    for &idx in candidates.iter() {
        if response.contains(idx) {
            return Err(Error::OverlappingColumnSets { index: idx });
        }
    }
    Ok(())
}

/// Marginal ranking restricted to an explicit candidate set; data is used
/// exactly as given (no standardization).
pub fn marginal_ranking_among(
    data: &DataMatrix,
    candidates: &ColumnSet,
    response: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<RelevanceRanking> {
    cfg.validate()?;
    check_candidates(data, candidates, response)?;
    let ey = centered_distances(data, response, cfg.exponent)?;
    let vyy = dcov2_from_centered(&ey, &ey)?;
    let mut ranked = Vec::with_capacity(candidates.len());
    for &i in candidates.iter() {
        let ei = centered_distances(data, &ColumnSet::single(i), cfg.exponent)?;
        let vxy = dcov2_from_centered(&ei, &ey)?;
        let vxx = dcov2_from_centered(&ei, &ei)?;
        ranked.push((i, dcor2_from_parts(vxy, vxx, vyy, cfg.eps)));
    }
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(RelevanceRanking { ranked })
}

/// Marginal ρ̂²(X_i, Y) for every non-response column, sorted descending.
pub fn marginal_ranking(
    data: &DataMatrix,
    response: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<RelevanceRanking> {
    cfg.validate()?;
    response.check_within(data.n_cols())?;
    let candidates = complement_of(response, data.n_cols());
    let prepared;
    let data = if cfg.standardize {
        prepared = standardize_except(data, response.as_slice());
        &prepared
    } else {
        data
    };
    marginal_ranking_among(data, &candidates, response, cfg)
}

/// All feature columns not used as the response, ascending.
pub fn complement_of(response: &ColumnSet, p: usize) -> ColumnSet {
    ColumnSet::new((0..p).filter(|j| !response.contains(*j)).collect())
        .expect("a filtered range has no duplicates")
}

/// Forward pass over a precomputed ranking.
pub fn kww_forward(
    data: &DataMatrix,
    ranking: &RelevanceRanking,
    response: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<RelevantSet> {
    cfg.validate()?;
    if ranking.ranked.is_empty() {
        return Err(Error::NotEnoughFeatures { needed: 1, got: 0 });
    }
    let n = data.n_rows();
    let ey = centered_distances(data, response, cfg.exponent)?;

    // squared distances over the accepted set accumulate column by column in
    // acceptance order, reproducing sample_dcov2 on the union bit for bit
    let mut sq = alloc::vec![0.0; n * n];
    let first = ranking.ranked[0].0;
    crate::dcov::add_column_sq_dists(data, first, &mut sq);
    let joint = |sq_now: Vec<f64>| -> Result<f64> {
        let d = crate::dcov::matrix_from_sq(sq_now, n, cfg.exponent);
        let e = crate::dcov::double_center(&d);
        dcov2_from_centered(&e, &ey)
    };
    let mut selected = alloc::vec![first];
    let mut current = joint(sq.clone())?;
    let mut trace = alloc::vec![math::sqrt(current.max(0.0))];
    for &(cand, _) in &ranking.ranked[1..] {
        let mut grown = sq.clone();
        crate::dcov::add_column_sq_dists(data, cand, &mut grown);
        let v = joint(grown.clone())?;
        if v >= current - cfg.eps {
            selected.push(cand);
            sq = grown;
            current = v;
            trace.push(math::sqrt(current.max(0.0)));
        } else {
            break;
        }
    }
    Ok(RelevantSet {
        selected: ColumnSet::new(selected).expect("ranking indices are distinct"),
        dcov_trace: trace,
    })
}

/// Forward selection restricted to an explicit candidate set; data is used
/// exactly as given.
pub fn kww_select_among(
    data: &DataMatrix,
    candidates: &ColumnSet,
    response: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<RelevantSet> {
    let ranking = marginal_ranking_among(data, candidates, response, cfg)?;
    kww_forward(data, &ranking, response, cfg)
}

/// Forward selection over every non-response column.
pub fn kww_select(
    data: &DataMatrix,
    response: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<RelevantSet> {
    cfg.validate()?;
    response.check_within(data.n_cols())?;
    let candidates = complement_of(response, data.n_cols());
    let prepared;
    let data = if cfg.standardize {
        prepared = standardize_except(data, response.as_slice());
        &prepared
    } else {
        data
    };
    kww_select_among(data, &candidates, response, cfg)
}
