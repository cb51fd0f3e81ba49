//! The monotone linkage π(i, S) = Σ_{j∈S} −ν̂²(X_i, X_j) and the
//! quasi-concave objective M_π(T) = min_{i∉T} π(i, T), both served from a
//! precomputed pairwise dependence cache.

use alloc::string::String;
use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::dcov::{centered_distances, dcov2_from_centered, CenteredDistanceMatrix};
use crate::error::{Error, Result};

/// Keep at most this many f64s of centered distance matrices live at once
/// when building a cache (≈480 MB); above it, pairs recompute on the fly.
const HOLD_ALL_LIMIT: usize = 60_000_000;

/// Symmetric p×p matrix of pairwise single-column ν̂² values, plus the
/// comparison tolerance every consumer of the cache shares.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseDCovCache {
    p: usize,
    matrix: Vec<f64>,
    names: Vec<String>,
    eps: f64,
}

impl PairwiseDCovCache {
    /// Wrap an existing symmetric matrix (row-major, p×p with p = names.len()).
    pub fn from_matrix(matrix: Vec<f64>, names: Vec<String>, eps: f64) -> Result<Self> {
        let p = names.len();
        if matrix.len() != p * p {
            return Err(Error::NotSquare {
                len: matrix.len(),
                rows: p,
            });
        }
        let eps_valid = eps >= 0.0; // NaN fails this too
        if !eps_valid {
            return Err(Error::InvalidTolerance { value: eps });
        }
        for (idx, v) in matrix.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row: idx / p,
                    col: idx % p,
                });
            }
        }
        for i in 0..p {
            for j in (i + 1)..p {
                if matrix[i * p + j] != matrix[j * p + i] {
                    return Err(Error::AsymmetricCache { i, j });
                }
            }
        }
        Ok(PairwiseDCovCache {
            p,
            matrix,
            names,
            eps,
        })
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.p + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Submatrix cache over `keep` (positions into this cache). Entries are
    /// per-pair, so restriction equals rebuilding from the restricted data.
    pub fn restrict(&self, keep: &[usize]) -> Result<PairwiseDCovCache> {
        for (k, &idx) in keep.iter().enumerate() {
            if idx >= self.p {
                return Err(Error::ColumnOutOfRange {
                    index: idx,
                    columns: self.p,
                });
            }
            if keep[..k].contains(&idx) {
                return Err(Error::DuplicateColumnIndex { index: idx });
            }
        }
        let m = keep.len();
        let mut matrix = Vec::with_capacity(m * m);
        for &i in keep {
            for &j in keep {
                matrix.push(self.get(i, j));
            }
        }
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        Ok(PairwiseDCovCache {
            p: m,
            matrix,
            names,
            eps: self.eps,
        })
    }
}

/// Pairwise ν̂² over every unordered pair of the given feature columns.
/// Entry (i, j) reproduces `sample_dcov2` on singletons bit for bit.
pub fn build_cache(
    data: &DataMatrix,
    features: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<PairwiseDCovCache> {
    cfg.validate()?;
    features.check_within(data.n_cols())?;
    let m = features.len();
    if m < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: m });
    }
    let n = data.n_rows();
    let names: Vec<String> = features.iter().map(|&j| data.name(j).into()).collect();
    let mut matrix = alloc::vec![0.0; m * m];

    let center = |col: usize| -> Result<CenteredDistanceMatrix> {
        centered_distances(data, &ColumnSet::single(col), cfg.exponent)
    };

    if m * n * n <= HOLD_ALL_LIMIT {
        let mut centered = Vec::with_capacity(m);
        for &col in features.iter() {
            centered.push(center(col)?);
        }
        for i in 0..m {
            for j in i..m {
                let v = dcov2_from_centered(&centered[i], &centered[j])?;
                matrix[i * m + j] = v;
                matrix[j * m + i] = v;
            }
        }
    } else {
        let cols = features.as_slice();
        for i in 0..m {
            let ei = center(cols[i])?;
            matrix[i * m + i] = dcov2_from_centered(&ei, &ei)?;
            for j in (i + 1)..m {
                let ej = center(cols[j])?;
                let v = dcov2_from_centered(&ei, &ej)?;
                matrix[i * m + j] = v;
                matrix[j * m + i] = v;
            }
        }
    }

    Ok(PairwiseDCovCache {
        p: m,
        matrix,
        names,
        eps: cfg.eps,
    })
}

/// The monotone linkage π(i, S) = Σ_{j ∈ S} −cache[i][j].
pub fn pi_linkage(i: usize, s: &ColumnSet, cache: &PairwiseDCovCache) -> Result<f64> {
    if i >= cache.p {
        return Err(Error::ColumnOutOfRange {
            index: i,
            columns: cache.p,
        });
    }
    if s.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    s.check_within(cache.p)?;
    if s.contains(i) {
        return Err(Error::LinkageMemberInSet { index: i });
    }
    Ok(linkage_sum(cache, i, s.as_slice()))
}

#[inline]
fn linkage_sum(cache: &PairwiseDCovCache, i: usize, members: &[usize]) -> f64 {
    let row = &cache.matrix[i * cache.p..(i + 1) * cache.p];
    let mut sum = 0.0;
    for &j in members {
        sum -= row[j];
    }
    sum
}

/// M_π(T) = min over features outside T of π(i, T). Defined only for
/// nonempty proper subsets of the cache's ground set.
pub fn m_pi(t: &ColumnSet, cache: &PairwiseDCovCache) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    t.check_within(cache.p)?;
    if t.len() == cache.p {
        return Err(Error::FullGroundSet);
    }
    let mut inside = alloc::vec![false; cache.p];
    for &j in t.iter() {
        inside[j] = true;
    }
    let mut best = f64::INFINITY;
    for (i, &in_t) in inside.iter().enumerate() {
        if in_t {
            continue;
        }
        let v = linkage_sum(cache, i, t.as_slice());
        if v < best {
            best = v;
        }
    }
    Ok(best)
}
