//! Distance matrices, double-centering, and the sample distance
//! covariance / correlation kernels everything else is built on.

use alloc::vec;
use alloc::vec::Vec;

use crate::data::{ColumnSet, DCovConfig, DataMatrix};
use crate::error::{Error, Result};
use crate::math;

/// Dense symmetric n×n matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::NotSquare {
                len: entries.len(),
                rows: n,
            });
        }
        for (idx, v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row: idx / n,
                    col: idx % n,
                });
            }
        }
        Ok(SquareMatrix { n, entries })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.n + l]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// A distance matrix after double-centering: row and column sums vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredDistanceMatrix {
    inner: SquareMatrix,
}

impl CenteredDistanceMatrix {
    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.inner.get(k, l)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.inner
    }
}

/// Compensated (Kahan) accumulator for long reductions.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

/// Raise accumulated squared Euclidean distances to the distance exponent.
pub(crate) fn matrix_from_sq(mut sq: Vec<f64>, n: usize, exponent: f64) -> SquareMatrix {
    if exponent == 2.0 {
        // squared distances are the entries themselves
    } else if exponent == 1.0 {
        for v in sq.iter_mut() {
            *v = math::sqrt(*v);
        }
    } else {
        let half = exponent / 2.0;
        for v in sq.iter_mut() {
            *v = math::powf(*v, half);
        }
    }
    SquareMatrix { n, entries: sq }
}

/// Add column `col`'s squared coordinate differences into `sq` (n×n).
///
/// Column-set distance matrices accumulate per column in set order, so a
/// saved accumulator extended by one more column reproduces the from-scratch
/// result bit for bit.
pub(crate) fn add_column_sq_dists(data: &DataMatrix, col: usize, sq: &mut [f64]) {
    let n = data.n_rows();
    for k in 0..n {
        let xk = data.get(k, col);
        for l in (k + 1)..n {
            let d = xk - data.get(l, col);
            let contrib = d * d;
            sq[k * n + l] += contrib;
            sq[l * n + k] += contrib;
        }
    }
}

/// Pairwise distance matrix of `n` points in `d` dimensions (row-major),
/// with each Euclidean distance raised to `exponent`.
pub fn distance_matrix(points: &[f64], n: usize, d: usize, exponent: f64) -> Result<SquareMatrix> {
    if n < 2 {
        return Err(Error::NotEnoughRows { rows: n });
    }
    if d == 0 {
        return Err(Error::NoColumns);
    }
    if points.len() != n * d {
        return Err(Error::RaggedRow {
            row: points.len() / d,
            expected: d,
            got: points.len() % d,
        });
    }
    for (idx, v) in points.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                row: idx / d,
                col: idx % d,
            });
        }
    }
    check_exponent(exponent)?;
    let mut sq = vec![0.0; n * n];
    for k in 0..n {
        let pk = &points[k * d..(k + 1) * d];
        for l in (k + 1)..n {
            let pl = &points[l * d..(l + 1) * d];
            let mut s = 0.0;
            for c in 0..d {
                let diff = pk[c] - pl[c];
                s += diff * diff;
            }
            sq[k * n + l] = s;
            sq[l * n + k] = s;
        }
    }
    Ok(matrix_from_sq(sq, n, exponent))
}

/// Distance matrix over the rows of `data` restricted to the columns in
/// `cols` (squared differences accumulate in set order).
pub fn column_set_distance_matrix(
    data: &DataMatrix,
    cols: &ColumnSet,
    exponent: f64,
) -> Result<SquareMatrix> {
    if cols.is_empty() {
        return Err(Error::EmptyColumnSet);
    }
    cols.check_within(data.n_cols())?;
    check_exponent(exponent)?;
    let n = data.n_rows();
    let mut sq = vec![0.0; n * n];
    for &col in cols.iter() {
        add_column_sq_dists(data, col, &mut sq);
    }
    Ok(matrix_from_sq(sq, n, exponent))
}

fn check_exponent(exponent: f64) -> Result<()> {
    if !(exponent > 0.0 && exponent <= 2.0) {
        return Err(Error::InvalidExponent { value: exponent });
    }
    Ok(())
}

/// Double-center: subtract row means and column means, add the grand mean.
/// Equivalent to J·D·J with J = I − (1/n)11ᵀ, in O(n²).
pub fn double_center(d: &SquareMatrix) -> CenteredDistanceMatrix {
    let n = d.n;
    let nf = n as f64;
    let mut row_means = vec![0.0; n];
    let mut col_means = vec![0.0; n];
    let mut grand = Kahan::default();
    for (k, mean) in row_means.iter_mut().enumerate() {
        let mut row = Kahan::default();
        for l in 0..n {
            row.add(d.get(k, l));
        }
        *mean = row.value() / nf;
        grand.add(row.value());
    }
    for (l, mean) in col_means.iter_mut().enumerate() {
        let mut col = Kahan::default();
        for k in 0..n {
            col.add(d.get(k, l));
        }
        *mean = col.value() / nf;
    }
    let grand_mean = grand.value() / (nf * nf);
    let mut entries = Vec::with_capacity(n * n);
    for (k, &rm) in row_means.iter().enumerate() {
        for (l, &cm) in col_means.iter().enumerate() {
            entries.push(d.get(k, l) - rm - cm + grand_mean);
        }
    }
    CenteredDistanceMatrix {
        inner: SquareMatrix { n, entries },
    }
}

/// (1/n²) Σ_{k,l} a_{kl}·b_{kl}, the workhorse inner product.
pub fn hadamard_mean(a: &SquareMatrix, b: &SquareMatrix) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::LengthMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let mut acc = Kahan::default();
    for (x, y) in a.entries.iter().zip(b.entries.iter()) {
        acc.add(x * y);
    }
    let nf = a.n as f64;
    Ok(acc.value() / (nf * nf))
}

/// ν̂² from two already-centered distance matrices.
pub fn dcov2_from_centered(a: &CenteredDistanceMatrix, b: &CenteredDistanceMatrix) -> Result<f64> {
    hadamard_mean(&a.inner, &b.inner)
}

/// Centered distance matrix of the rows of `data` over the columns `cols`.
pub fn centered_distances(
    data: &DataMatrix,
    cols: &ColumnSet,
    exponent: f64,
) -> Result<CenteredDistanceMatrix> {
    Ok(double_center(&column_set_distance_matrix(
        data, cols, exponent,
    )?))
}

/// Sample distance covariance ν̂²(A, B): the mean of the elementwise product
/// of the two double-centered distance matrices. Tiny negative values from
/// roundoff are reported as-is, never clamped.
pub fn sample_dcov2(
    data: &DataMatrix,
    a: &ColumnSet,
    b: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<f64> {
    cfg.validate()?;
    let ea = centered_distances(data, a, cfg.exponent)?;
    let eb = centered_distances(data, b, cfg.exponent)?;
    dcov2_from_centered(&ea, &eb)
}

/// The ρ̂² ratio with its zero-denominator branch, from raw ν̂² values.
pub fn dcor2_from_parts(vxy: f64, vxx: f64, vyy: f64, eps: f64) -> f64 {
    let scale = if math::abs(vxx) > math::abs(vyy) {
        math::abs(vxx)
    } else {
        math::abs(vyy)
    };
    let denom2 = vxx * vyy;
    if denom2 <= eps * scale {
        return 0.0;
    }
    vxy / math::sqrt(denom2)
}

/// Sample distance correlation ρ̂²(A, B) ∈ [0, 1] (within roundoff), exactly
/// 0 when the denominator product vanishes within tolerance.
pub fn sample_dcor2(
    data: &DataMatrix,
    a: &ColumnSet,
    b: &ColumnSet,
    cfg: &DCovConfig,
) -> Result<f64> {
    cfg.validate()?;
    let ea = centered_distances(data, a, cfg.exponent)?;
    let eb = centered_distances(data, b, cfg.exponent)?;
    let vxy = dcov2_from_centered(&ea, &eb)?;
    let vxx = dcov2_from_centered(&ea, &ea)?;
    let vyy = dcov2_from_centered(&eb, &eb)?;
    Ok(dcor2_from_parts(vxy, vxx, vyy, cfg.eps))
}

/// Union of two disjoint column sets: ordered concatenation of A then B.
/// Treating the union as one multivariate column block is exactly column
/// concatenation, so ν̂² over the union equals ν̂² of the appended matrix.
pub fn augment_union(data: &DataMatrix, a: &ColumnSet, b: &ColumnSet) -> Result<ColumnSet> {
    a.check_within(data.n_cols())?;
    b.check_within(data.n_cols())?;
    for &idx in b.iter() {
        if a.contains(idx) {
            return Err(Error::OverlappingColumnSets { index: idx });
        }
    }
    let mut indices = Vec::with_capacity(a.len() + b.len());
    indices.extend_from_slice(a.as_slice());
    indices.extend_from_slice(b.as_slice());
    ColumnSet::new(indices)
}

/// Center and scale every column to mean 0, standard deviation 1
/// (population divisor n). Constant columns become all zeros.
pub fn standardize(data: &DataMatrix) -> DataMatrix {
    standardize_except(data, &[])
}

/// [`standardize`], but columns listed in `except` pass through untouched.
pub fn standardize_except(data: &DataMatrix, except: &[usize]) -> DataMatrix {
    let n = data.n_rows();
    let p = data.n_cols();
    let nf = n as f64;
    let mut values = data.values().to_vec();
    for j in 0..p {
        if except.contains(&j) {
            continue;
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = Kahan::default();
        for i in 0..n {
            let v = data.get(i, j);
            min = min.min(v);
            max = max.max(v);
            sum.add(v);
        }
        if min == max {
            for i in 0..n {
                values[i * p + j] = 0.0;
            }
            continue;
        }
        let mean = sum.value() / nf;
        let mut ss = Kahan::default();
        for i in 0..n {
            let d = data.get(i, j) - mean;
            ss.add(d * d);
        }
        let sd = math::sqrt(ss.value() / nf);
        for i in 0..n {
            values[i * p + j] = (data.get(i, j) - mean) / sd;
        }
    }
    DataMatrix::new(n, p, values, data.column_names().to_vec())
        .expect("standardized matrix keeps shape, names, and finiteness")
}
