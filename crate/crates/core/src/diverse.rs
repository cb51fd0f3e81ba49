//! Greedy π-series construction, π-cluster extraction, enumeration of all
//! inclusion-minimal maximizers of M_π, and the iterative peeling that turns
//! repeated enumeration into a full diversity ordering of the features.

use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::dcov::standardize;
use crate::error::{Error, Result};
use crate::linkage::{build_cache, PairwiseDCovCache};

/// A greedy ordering of the whole ground set: element k+1 minimizes the
/// linkage π against the prefix of the first k elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PiSeries {
    /// Permutation of all feature positions; `order[0]` is the start.
    pub order: Vec<usize>,
    /// `step_values[k]` = π(order[k+1], {order[0..=k]}); p−1 entries, and
    /// along a π-series this equals M_π of the prefix of length k+1.
    pub step_values: Vec<f64>,
}

/// Shortest series prefix attaining the maximal step value.
#[derive(Debug, Clone, PartialEq)]
pub struct PiCluster {
    /// Prefix members in series order.
    pub members: ColumnSet,
    /// M_π of the prefix (the attained step value).
    pub value: f64,
    /// Feature the originating series started from.
    pub origin_start: usize,
}

/// All inclusion-minimal maximizers of M_π, sharing one objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalMaximizerResult {
    /// Pairwise disjoint clusters, sorted by size then members.
    pub clusters: Vec<PiCluster>,
    /// The shared maximal M_π value.
    pub objective: f64,
}

/// One peeling round: the features removed together and the M_π objective
/// they attained (`None` for the leftover tail that no round could score).
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityTier {
    pub features: ColumnSet,
    pub objective: Option<f64>,
}

/// Greedily order the whole ground set starting from `start`; ties in the
/// argmin go to the lowest feature index, detected with the cache tolerance.
pub fn build_pi_series(start: usize, cache: &PairwiseDCovCache) -> Result<PiSeries> {
    let p = cache.p();
    if p < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: p });
    }
    if start >= p {
        return Err(Error::ColumnOutOfRange {
            index: start,
            columns: p,
        });
    }
    let eps = cache.eps();
    let mut order = Vec::with_capacity(p);
    let mut step_values = Vec::with_capacity(p - 1);
    let mut in_prefix = alloc::vec![false; p];
    // running linkage of every outside feature against the current prefix
    let mut link = alloc::vec![0.0; p];
    order.push(start);
    in_prefix[start] = true;
    for (i, slot) in link.iter_mut().enumerate() {
        if i != start {
            *slot = -cache.get(i, start);
        }
    }
    for _ in 1..p {
        let mut min_val = f64::INFINITY;
        for i in 0..p {
            if !in_prefix[i] && link[i] < min_val {
                min_val = link[i];
            }
        }
        let mut chosen = usize::MAX;
        for i in 0..p {
            if !in_prefix[i] && link[i] <= min_val + eps {
                chosen = i;
                break;
            }
        }
        order.push(chosen);
        step_values.push(link[chosen]);
        in_prefix[chosen] = true;
        for i in 0..p {
            if !in_prefix[i] {
                link[i] -= cache.get(i, chosen);
            }
        }
    }
    Ok(PiSeries { order, step_values })
}

/// The smallest starting subset: shortest prefix whose step value attains
/// the series maximum (first attainment within the cache tolerance).
pub fn extract_pi_cluster(series: &PiSeries, cache: &PairwiseDCovCache) -> Result<PiCluster> {
    let p = cache.p();
    if series.order.len() != p || series.step_values.len() + 1 != p {
        return Err(Error::LengthMismatch {
            left: series.order.len(),
            right: p,
        });
    }
    let eps = cache.eps();
    let mut max = f64::NEG_INFINITY;
    for &v in &series.step_values {
        if v > max {
            max = v;
        }
    }
    let mut at = 0;
    for (j, &v) in series.step_values.iter().enumerate() {
        if v >= max - eps {
            at = j;
            break;
        }
    }
    let members = ColumnSet::new(series.order[..=at].to_vec())
        .expect("series order is a permutation, so any prefix is duplicate-free");
    Ok(PiCluster {
        value: series.step_values[at],
        origin_start: series.order[0],
        members,
    })
}

fn is_subset_sorted(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// Reduce per-start candidate clusters to the inclusion-minimal maximizers:
/// keep the clusters within `eps` of the best value, deduplicate by member
/// set, and drop any survivor strictly containing another survivor.
pub fn combine_pi_clusters(clusters: Vec<PiCluster>, eps: f64) -> Result<MinimalMaximizerResult> {
    if clusters.is_empty() {
        return Err(Error::NotEnoughFeatures { needed: 1, got: 0 });
    }
    let mut clusters = clusters;
    clusters.sort_by_key(|c| c.origin_start);
    let mut best = f64::NEG_INFINITY;
    for c in &clusters {
        if c.value > best {
            best = c.value;
        }
    }
    let mut survivors: Vec<(Vec<usize>, PiCluster)> = Vec::new();
    for c in clusters {
        if c.value < best - eps {
            continue;
        }
        let key = c.members.sorted_members();
        if survivors.iter().any(|(k, _)| *k == key) {
            continue;
        }
        survivors.push((key, c));
    }
    // smallest first so the minimality scan only looks at kept sets
    survivors.sort_by(|(ka, _), (kb, _)| ka.len().cmp(&kb.len()).then_with(|| ka.cmp(kb)));
    let mut kept: Vec<(Vec<usize>, PiCluster)> = Vec::new();
    for (key, c) in survivors {
        if !kept.iter().any(|(k, _)| is_subset_sorted(k, &key)) {
            kept.push((key, c));
        }
    }
    Ok(MinimalMaximizerResult {
        clusters: kept.into_iter().map(|(_, c)| c).collect(),
        objective: best,
    })
}

/// Algorithm: one π-series per start feature, one candidate cluster per
/// series, then reduction to the inclusion-minimal maximizers of M_π.
pub fn minimal_maximizers(cache: &PairwiseDCovCache) -> Result<MinimalMaximizerResult> {
    let p = cache.p();
    if p < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: p });
    }
    let mut clusters = Vec::with_capacity(p);
    for start in 0..p {
        let series = build_pi_series(start, cache)?;
        clusters.push(extract_pi_cluster(&series, cache)?);
    }
    combine_pi_clusters(clusters, cache.eps())
}

/// Peel a cache to exhaustion: each round records the union of the minimal
/// maximizers as a tier and removes it. Tier features are positions in the
/// cache passed in; together the tiers partition the ground set.
pub fn diversity_ordering_from_cache(cache: &PairwiseDCovCache) -> Result<Vec<DiversityTier>> {
    let p = cache.p();
    if p < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: p });
    }
    let mut remaining: Vec<usize> = (0..p).collect();
    let mut tiers = Vec::new();
    while remaining.len() >= 2 {
        let sub = cache.restrict(&remaining)?;
        let result = minimal_maximizers(&sub)?;
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
            features: ColumnSet::new(tier_members)
                .expect("tier members are deduplicated before insertion"),
            objective: Some(result.objective),
        });
    }
    if !remaining.is_empty() {
        tiers.push(DiversityTier {
            features: ColumnSet::new(remaining).expect("leftover positions are distinct"),
            objective: None,
        });
    }
    Ok(tiers)
}

/// Full diversity ordering of a feature matrix: optional standardization,
/// one pairwise cache build, then peeling. Tier indices address `data`'s
/// columns.
pub fn diversity_ordering(data: &DataMatrix, cfg: &DCovConfig) -> Result<Vec<DiversityTier>> {
    cfg.validate()?;
    let p = data.n_cols();
    if p < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: p });
    }
    let prepared;
    let data = if cfg.standardize {
        prepared = standardize(data);
        &prepared
    } else {
        data
    };
    let cache = build_cache(data, &ColumnSet::range(0, p), cfg)?;
    diversity_ordering_from_cache(&cache)
}
