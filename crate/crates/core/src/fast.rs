//! O(n log n) sample distance covariance for a pair of scalar samples,
//! exponent 1 only. Matches the naive O(n²) kernel to relative 1e-9.

use alloc::vec;
use alloc::vec::Vec;

use crate::data::DCovConfig;
use crate::dcov::Kahan;
use crate::error::{Error, Result};

/// Fenwick tree over y-ranks; each node folds count, Σx, Σy and Σxy of the
/// points inserted at or below it.
struct PairTree {
    len: usize,
    cnt: Vec<f64>,
    sx: Vec<f64>,
    sy: Vec<f64>,
    sxy: Vec<f64>,
}

impl PairTree {
    fn new(len: usize) -> Self {
        PairTree {
            len,
            cnt: vec![0.0; len + 1],
            sx: vec![0.0; len + 1],
            sy: vec![0.0; len + 1],
            sxy: vec![0.0; len + 1],
        }
    }

    fn insert(&mut self, rank: usize, x: f64, y: f64) {
        let mut i = rank + 1;
        while i <= self.len {
            self.cnt[i] += 1.0;
            self.sx[i] += x;
            self.sy[i] += y;
            self.sxy[i] += x * y;
            i += i & i.wrapping_neg();
        }
    }

    /// Totals over ranks 0..=rank.
    fn prefix(&self, rank: usize) -> (f64, f64, f64, f64) {
        let (mut c, mut x, mut y, mut xy) = (0.0, 0.0, 0.0, 0.0);
        let mut i = rank + 1;
        while i > 0 {
            c += self.cnt[i];
            x += self.sx[i];
            y += self.sy[i];
            xy += self.sxy[i];
            i -= i & i.wrapping_neg();
        }
        (c, x, y, xy)
    }
}

/// Σ_l |v_k − v_l| for every k, via one sort and prefix sums.
fn abs_row_sums(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut prefix = Vec::with_capacity(n);
    let mut acc = Kahan::default();
    for &idx in &order {
        acc.add(values[idx]);
        prefix.push(acc.value());
    }
    let total = prefix[n - 1];
    let mut out = vec![0.0; n];
    for (i, &idx) in order.iter().enumerate() {
        let v = values[idx];
        let below = (i + 1) as f64 * v - prefix[i];
        let above = (total - prefix[i]) - (n - 1 - i) as f64 * v;
        out[idx] = below + above;
    }
    out
}

/// ν̂²(x, y) for scalar samples at distance exponent 1, in O(n log n).
///
/// Decomposes the double-centered product sum as
/// S1/n² − 2·S2/n³ + S3/n⁴ with S1 = Σ|Δx||Δy|, S2 = Σ_k rowsum_x(k)·rowsum_y(k),
/// S3 = (Σ rowsum_x)(Σ rowsum_y); S1 comes from an x-sorted sweep with a
/// Fenwick tree over y-ranks.
pub fn fast_dcov2_univariate(x: &[f64], y: &[f64], cfg: &DCovConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.exponent != 1.0 {
        return Err(Error::ExponentNotOne {
            value: cfg.exponent,
        });
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::NotEnoughRows { rows: n });
    }
    for (i, v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { row: i, col: 0 });
        }
    }
    for (i, v) in y.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { row: i, col: 1 });
        }
    }

    // center both samples: keeps every accumulated term near the data scale
    let nf = n as f64;
    let mut mx = Kahan::default();
    let mut my = Kahan::default();
    for i in 0..n {
        mx.add(x[i]);
        my.add(y[i]);
    }
    let (mx, my) = (mx.value() / nf, my.value() / nf);
    let xc: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let yc: Vec<f64> = y.iter().map(|v| v - my).collect();

    let rx = abs_row_sums(&xc);
    let ry = abs_row_sums(&yc);
    let mut s2 = Kahan::default();
    let mut tx = Kahan::default();
    let mut ty = Kahan::default();
    for k in 0..n {
        s2.add(rx[k] * ry[k]);
        tx.add(rx[k]);
        ty.add(ry[k]);
    }
    let s3 = tx.value() * ty.value();

    // y-rank compression (ties share a rank; tied pairs contribute zero)
    let mut sorted_y = yc.clone();
    sorted_y.sort_unstable_by(f64::total_cmp);
    sorted_y.dedup();
    let rank_of = |v: f64| -> usize {
        sorted_y.partition_point(|&u| u.total_cmp(&v) == core::cmp::Ordering::Less)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| xc[a].total_cmp(&xc[b]));

    let mut tree = PairTree::new(sorted_y.len());
    let (mut ct, mut sxt, mut syt, mut sxyt) = (0.0, 0.0, 0.0, 0.0);
    let mut d = Kahan::default();
    for &idx in &order {
        let (xv, yv) = (xc[idx], yc[idx]);
        let r = rank_of(yv);
        let (c_le, sx_le, sy_le, sxy_le) = tree.prefix(r);
        // processed points all have x ≤ xv (x ties contribute zero)
        let below = xv * yv * c_le - yv * sx_le - xv * sy_le + sxy_le;
        let above =
            xv * (syt - sy_le) - (sxyt - sxy_le) - xv * yv * (ct - c_le) + yv * (sxt - sx_le);
        d.add(below + above);
        tree.insert(r, xv, yv);
        ct += 1.0;
        sxt += xv;
        syt += yv;
        sxyt += xv * yv;
    }
    let s1 = 2.0 * d.value();

    Ok(s1 / (nf * nf) - 2.0 * s2.value() / (nf * nf * nf) + s3 / (nf * nf * nf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ColumnSet, DataMatrix};
    use crate::dcov::sample_dcov2;
    use alloc::format;
    use alloc::string::String;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn naive(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut values = Vec::with_capacity(n * 2);
        for i in 0..n {
            values.push(x[i]);
            values.push(y[i]);
        }
        let names: Vec<String> = vec![format!("x"), format!("y")];
        let data = DataMatrix::new(n, 2, values, names).unwrap();
        sample_dcov2(
            &data,
            &ColumnSet::single(0),
            &ColumnSet::single(1),
            &DCovConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn two_point_hand_value() {
        let v = fast_dcov2_univariate(&[0.0, 1.0], &[0.0, 2.0], &DCovConfig::default()).unwrap();
        assert!((v - 0.5).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn constant_x_gives_zero() {
        let v = fast_dcov2_univariate(
            &[3.0, 3.0, 3.0, 3.0],
            &[1.0, 2.0, 3.0, 4.0],
            &DCovConfig::default(),
        )
        .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn rejects_other_exponents() {
        let cfg = DCovConfig {
            exponent: 2.0,
            ..DCovConfig::default()
        };
        assert!(matches!(
            fast_dcov2_univariate(&[0.0, 1.0], &[0.0, 2.0], &cfg),
            Err(Error::ExponentNotOne { .. })
        ));
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(matches!(
            fast_dcov2_univariate(&[0.0, 1.0, 2.0], &[0.0, 2.0], &DCovConfig::default()),
            Err(Error::LengthMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn matches_naive_on_random_inputs() {
        let mut rng = StdRng::seed_from_u64(2024);
        for trial in 0..40 {
            let n = rng.random_range(2..200);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let fast = fast_dcov2_univariate(&x, &y, &DCovConfig::default()).unwrap();
            let slow = naive(&x, &y);
            let tol = 1e-9 * slow.abs().max(1e-12);
            assert!(
                (fast - slow).abs() <= tol,
                "trial {trial}: fast {fast} vs naive {slow}"
            );
        }
    }

    #[test]
    fn matches_naive_with_heavy_ties() {
        let mut rng = StdRng::seed_from_u64(7);
        for trial in 0..30 {
            let n = rng.random_range(3..80);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(0..4) as f64).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(0..3) as f64).collect();
            let fast = fast_dcov2_univariate(&x, &y, &DCovConfig::default()).unwrap();
            let slow = naive(&x, &y);
            let tol = 1e-9 * slow.abs().max(1e-12);
            assert!(
                (fast - slow).abs() <= tol,
                "trial {trial}: fast {fast} vs naive {slow}"
            );
        }
    }
}
