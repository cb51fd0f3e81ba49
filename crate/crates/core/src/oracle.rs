//! Exhaustive power-set machinery: an independent brute-force evaluation of
//! M_π over every nonempty proper subset (the verification oracle for the
//! greedy enumeration), plus the centering/scaling enumeration experiment
//! that correlates ρ̂²(S, Y) with ν̂²(S, Y) across the whole power set.

use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::dcov::{
    centered_distances, dcor2_from_parts, dcov2_from_centered, distance_matrix, double_center,
    standardize_except,
};
use crate::error::{Error, Result};
use crate::linkage::PairwiseDCovCache;
use crate::math;
use crate::relevant::complement_of;

/// Hard cap on exhaustive enumeration (2^20 subsets).
pub const MAX_ENUM_FEATURES: usize = 20;

/// M_π evaluated on every nonempty proper subset, with the maximizer and
/// inclusion-minimal-maximizer lists. Subsets are bitmasks over the cache's
/// feature positions; bit i set means feature i is in the subset.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    p: usize,
    eps: f64,
    /// values[mask − 1] = M_π(mask), for masks 1..=2^p − 2 ascending.
    values: Vec<f64>,
    /// Masks attaining the global maximum within eps, ascending.
    pub maximizers: Vec<u32>,
    /// The inclusion-minimal maximizers, ascending.
    pub minimal_maximizers: Vec<u32>,
    /// The global maximum of M_π.
    pub objective: f64,
}

impl EnumerationResult {
    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Number of subsets in the domain: 2^p − 2.
    pub fn n_subsets(&self) -> usize {
        self.values.len()
    }

    /// M_π for a nonempty proper subset mask; None outside the domain.
    pub fn value(&self, mask: u32) -> Option<f64> {
        let full = (1u32 << self.p) - 1;
        if mask == 0 || mask >= full {
            return None;
        }
        Some(self.values[(mask - 1) as usize])
    }

    /// Member positions of a mask, ascending.
    pub fn members(mask: u32) -> Vec<usize> {
        let mut m = mask;
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }
}

/// Brute-force M_π over the full domain; independent of the greedy code
/// (plain loops over the cache only).
pub fn enumerate_m_pi(cache: &PairwiseDCovCache) -> Result<EnumerationResult> {
    let p = cache.p();
    if p < 2 {
        return Err(Error::NotEnoughFeatures { needed: 2, got: p });
    }
    if p > MAX_ENUM_FEATURES {
        return Err(Error::SizeGuard {
            features: p,
            max: MAX_ENUM_FEATURES,
        });
    }
    let eps = cache.eps();
    let full: u32 = (1u32 << p) - 1;
    let mut values = Vec::with_capacity((full - 1) as usize);
    let mut objective = f64::NEG_INFINITY;
    for mask in 1..full {
        let mut best = f64::INFINITY;
        for i in 0..p {
            if mask & (1u32 << i) != 0 {
                continue;
            }
            let mut s = 0.0;
            let mut m = mask;
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                s -= cache.get(i, j);
                m &= m - 1;
            }
            if s < best {
                best = s;
            }
        }
        values.push(best);
        if best > objective {
            objective = best;
        }
    }
    let maximizers: Vec<u32> = (1..full)
        .filter(|&mask| values[(mask - 1) as usize] >= objective - eps)
        .collect();
    // scan smallest-first so minimality only needs checks against kept masks
    fn is_subset(a: u32, b: u32) -> bool {
        a & b == a
    }
    let mut by_size: Vec<u32> = maximizers.clone();
    by_size.sort_by_key(|&m| (m.count_ones(), m));
    let mut minimal: Vec<u32> = Vec::new();
    for m in by_size {
        if !minimal.iter().any(|&kept| is_subset(kept, m)) {
            minimal.push(m);
        }
    }
    minimal.sort_unstable();
    Ok(EnumerationResult {
        p,
        eps,
        values,
        maximizers,
        minimal_maximizers: minimal,
        objective,
    })
}

/// True iff every maximizer is exactly the union of the minimal maximizers
/// it contains.
pub fn union_decomposition_check(result: &EnumerationResult) -> bool {
    result.maximizers.iter().all(|&m| {
        let mut union = 0u32;
        for &k in &result.minimal_maximizers {
            if k & m == k {
                union |= k;
            }
        }
        union == m
    })
}

/// True iff the intersection of every overlapping pair of maximizers is
/// itself a maximizer.
pub fn intersection_closure_check(result: &EnumerationResult) -> bool {
    let maxs = &result.maximizers;
    for (a_idx, &a) in maxs.iter().enumerate() {
        for &b in &maxs[a_idx + 1..] {
            let inter = a & b;
            if inter == 0 {
                continue;
            }
            if maxs.binary_search(&inter).is_err() {
                return false;
            }
        }
    }
    true
}

/// True iff M_π(S∩T) ≥ min(M_π(S), M_π(T)) − eps for every overlapping pair
/// of domain subsets. Exhaustive: O(4^p) pairs, intended for small p.
pub fn quasi_concavity_check(result: &EnumerationResult) -> bool {
    let full = (1u32 << result.p) - 1;
    for s in 1..full {
        let vs = result.values[(s - 1) as usize];
        for t in s..full {
            let inter = s & t;
            if inter == 0 {
                continue;
            }
            let vt = result.values[(t - 1) as usize];
            let vi = result.values[(inter - 1) as usize];
            if vi < vs.min(vt) - result.eps {
                return false;
            }
        }
    }
    true
}

/// Output of the power-set dependence experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingExperimentResult {
    /// ρ̂²(S, Y) for every nonempty feature subset S, ascending mask order.
    pub rho_e: Vec<f64>,
    /// ν̂²(S, Y) in the same order.
    pub nu_e: Vec<f64>,
    /// ρ̂ between the two lists treated as paired scalar samples
    /// (0 when the correlation degenerates).
    pub rho_of_rho_nu: f64,
    /// Whether features were standardized before the sweep.
    pub standardized: bool,
}

/// Enumerate every nonempty subset of the non-response columns (the full
/// set included: 2^p − 1 subsets), record ρ̂²(S, Y) and ν̂²(S, Y), then
/// correlate the two lists.
pub fn power_set_dependence_experiment(
    data: &DataMatrix,
    response: &ColumnSet,
    cfg: &DCovConfig,
    standardize: bool,
) -> Result<ScalingExperimentResult> {
    cfg.validate()?;
    response.check_within(data.n_cols())?;
    if response.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    let features = complement_of(response, data.n_cols());
    let m = features.len();
    if m == 0 {
        return Err(Error::NotEnoughFeatures { needed: 1, got: 0 });
    }
    if m > MAX_ENUM_FEATURES {
        return Err(Error::SizeGuard {
            features: m,
            max: MAX_ENUM_FEATURES,
        });
    }
    let prepared;
    let data = if standardize {
        prepared = standardize_except(data, response.as_slice());
        &prepared
    } else {
        data
    };
    let ey = centered_distances(data, response, cfg.exponent)?;
    let vyy = dcov2_from_centered(&ey, &ey)?;
    let full: u32 = (1u32 << m) - 1;
    let mut rho_e = Vec::with_capacity(full as usize);
    let mut nu_e = Vec::with_capacity(full as usize);
    for mask in 1..=full {
        let subset = ColumnSet::new(
            EnumerationResult::members(mask)
                .into_iter()
                .map(|k| features.as_slice()[k])
                .collect(),
        )
        .expect("mask members are distinct");
        let es = centered_distances(data, &subset, cfg.exponent)?;
        let vxy = dcov2_from_centered(&es, &ey)?;
        let vxx = dcov2_from_centered(&es, &es)?;
        nu_e.push(vxy);
        rho_e.push(dcor2_from_parts(vxy, vxx, vyy, cfg.eps));
    }
    let rho_of_rho_nu = paired_list_dcor(&rho_e, &nu_e, cfg)?;
    Ok(ScalingExperimentResult {
        rho_e,
        nu_e,
        rho_of_rho_nu,
        standardized: standardize,
    })
}

/// ρ̂ between two paired scalar lists; 0 when fewer than two pairs or when
/// the correlation degenerates.
fn paired_list_dcor(u: &[f64], v: &[f64], cfg: &DCovConfig) -> Result<f64> {
    if u.len() < 2 {
        return Ok(0.0);
    }
    let n = u.len();
    let du = distance_matrix(u, n, 1, cfg.exponent)?;
    let dv = distance_matrix(v, n, 1, cfg.exponent)?;
    let eu = double_center(&du);
    let ev = double_center(&dv);
    let vxy = dcov2_from_centered(&eu, &ev)?;
    let vxx = dcov2_from_centered(&eu, &eu)?;
    let vyy = dcov2_from_centered(&ev, &ev)?;
    let r2 = dcor2_from_parts(vxy, vxx, vyy, cfg.eps);
    Ok(math::sqrt(r2.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diverse::minimal_maximizers;
    use alloc::format;
    use alloc::string::{String, ToString};
    use alloc::vec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn hand_cache() -> PairwiseDCovCache {
        let m = vec![
            1.0, 0.9, 0.1, //
            0.9, 1.0, 0.5, //
            0.1, 0.5, 1.0,
        ];
        PairwiseDCovCache::from_matrix(m, names(&["f0", "f1", "f2"]), 1e-12).unwrap()
    }

    fn random_cache(seed: u64, p: usize) -> PairwiseDCovCache {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut m = vec![0.0; p * p];
        for i in 0..p {
            m[i * p + i] = rng.random_range(0.0..1.0);
            for j in (i + 1)..p {
                let v = rng.random_range(0.0..1.0);
                m[i * p + j] = v;
                m[j * p + i] = v;
            }
        }
        let names: Vec<String> = (0..p).map(|i| format!("f{i}")).collect();
        PairwiseDCovCache::from_matrix(m, names, 1e-12).unwrap()
    }

    #[test]
    fn hand_cache_values_and_maximizer() {
        let res = enumerate_m_pi(&hand_cache()).unwrap();
        assert_eq!(res.n_subsets(), 6);
        let cases = [
            (0b001u32, -0.9),
            (0b010, -0.9),
            (0b011, -0.6),
            (0b100, -0.5),
            (0b101, -1.4),
            (0b110, -1.0),
        ];
        for (mask, want) in cases {
            let v = res.value(mask).unwrap();
            assert!((v - want).abs() < 1e-15, "mask {mask:b}: {v} vs {want}");
        }
        assert_eq!(res.maximizers, vec![0b100]);
        assert_eq!(res.minimal_maximizers, vec![0b100]);
        assert!((res.objective - (-0.5)).abs() < 1e-15);
        assert!(res.value(0).is_none());
        assert!(res.value(0b111).is_none());
    }

    #[test]
    fn constant_cache_yields_all_singletons() {
        let v = 0.3;
        let mut m = vec![v; 9];
        for i in 0..3 {
            m[i * 3 + i] = 1.0;
        }
        let cache = PairwiseDCovCache::from_matrix(m, names(&["a", "b", "c"]), 1e-12).unwrap();
        let res = enumerate_m_pi(&cache).unwrap();
        assert_eq!(res.minimal_maximizers, vec![0b001, 0b010, 0b100]);
        assert!((res.objective - (-v)).abs() < 1e-15);
        assert!(union_decomposition_check(&res));
        assert!(intersection_closure_check(&res));
        assert!(quasi_concavity_check(&res));
    }

    #[test]
    fn size_guard_rejects_large_ground_sets() {
        let p = 21;
        let m = vec![0.0; p * p];
        let names: Vec<String> = (0..p).map(|i| format!("f{i}")).collect();
        let cache = PairwiseDCovCache::from_matrix(m, names, 1e-12).unwrap();
        assert_eq!(
            enumerate_m_pi(&cache).unwrap_err(),
            Error::SizeGuard {
                features: 21,
                max: 20
            }
        );
    }

    #[test]
    fn random_caches_satisfy_the_combinatorial_theorems() {
        for seed in 0..10 {
            let res = enumerate_m_pi(&random_cache(seed, 6)).unwrap();
            assert!(union_decomposition_check(&res), "seed {seed}");
            assert!(intersection_closure_check(&res), "seed {seed}");
            assert!(quasi_concavity_check(&res), "seed {seed}");
        }
    }

    #[test]
    fn greedy_agrees_with_brute_force_on_random_caches() {
        for seed in 100..120 {
            let cache = random_cache(seed, 7);
            let oracle = enumerate_m_pi(&cache).unwrap();
            let greedy = minimal_maximizers(&cache).unwrap();
            let mut greedy_masks: Vec<u32> = greedy
                .clusters
                .iter()
                .map(|c| c.members.iter().fold(0u32, |acc, &i| acc | (1u32 << i)))
                .collect();
            greedy_masks.sort_unstable();
            assert_eq!(greedy_masks, oracle.minimal_maximizers, "seed {seed}");
            assert!((greedy.objective - oracle.objective).abs() <= 1e-12);
        }
    }

    #[test]
    fn experiment_single_feature_degenerates_to_zero() {
        let mut rng = StdRng::seed_from_u64(8);
        let n = 20;
        let mut values = Vec::with_capacity(n * 2);
        for _ in 0..n {
            values.push(rng.random_range(-1.0..1.0));
            values.push(rng.random_range(-1.0..1.0));
        }
        let data = DataMatrix::new(n, 2, values, names(&["x", "y"])).unwrap();
        let res = power_set_dependence_experiment(
            &data,
            &ColumnSet::single(1),
            &DCovConfig::default(),
            false,
        )
        .unwrap();
        assert_eq!(res.rho_e.len(), 1);
        assert_eq!(res.nu_e.len(), 1);
        assert_eq!(res.rho_of_rho_nu, 0.0);
    }

    #[test]
    fn experiment_lists_cover_the_power_set() {
        let mut rng = StdRng::seed_from_u64(9);
        let n = 30;
        let p = 4;
        let mut values = Vec::with_capacity(n * (p + 1));
        for _ in 0..n {
            for _ in 0..=p {
                values.push(rng.random_range(-1.0..1.0));
            }
        }
        let mut nm: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
        nm.push("y".into());
        let data = DataMatrix::new(n, p + 1, values, nm).unwrap();
        let cfg = DCovConfig::default();
        let res =
            power_set_dependence_experiment(&data, &ColumnSet::single(p), &cfg, true).unwrap();
        assert_eq!(res.rho_e.len(), 15);
        assert_eq!(res.nu_e.len(), 15);
        assert!(res.standardized);
        assert!((0.0..=1.0 + 1e-9).contains(&res.rho_of_rho_nu));
        // spot-check one subset against the public kernels
        let s = ColumnSet::new(vec![0, 2]).unwrap(); // mask 0b101 → position 4
        let std_data = standardize_except(&data, &[p]);
        let want_nu =
            crate::dcov::sample_dcov2(&std_data, &s, &ColumnSet::single(p), &cfg).unwrap();
        let want_rho =
            crate::dcov::sample_dcor2(&std_data, &s, &ColumnSet::single(p), &cfg).unwrap();
        assert_eq!(res.nu_e[4], want_nu);
        assert_eq!(res.rho_e[4], want_rho);
    }
}
