use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major sample matrix with named columns.
///
/// Invariants enforced at construction: at least 2 rows, at least 1 column,
/// every entry finite, column names unique and aligned index-for-index.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    names: Vec<String>,
    n: usize,
    p: usize,
}

impl DataMatrix {
    /// Build from a flat row-major buffer of `n * p` values.
    pub fn new(n: usize, p: usize, values: Vec<f64>, names: Vec<String>) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotEnoughRows { rows: n });
        }
        if p == 0 {
            return Err(Error::NoColumns);
        }
        if values.len() != n * p {
            return Err(Error::RaggedRow {
                row: values.len() / p,
                expected: p,
                got: values.len() % p,
            });
        }
        if names.len() != p {
            return Err(Error::NameCountMismatch {
                names: names.len(),
                cols: p,
            });
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row: idx / p,
                    col: idx % p,
                });
            }
        }
        for (j, name) in names.iter().enumerate() {
            if names[..j].contains(name) {
                return Err(Error::DuplicateColumnName { name: name.clone() });
            }
        }
        Ok(DataMatrix {
            values,
            names,
            n,
            p,
        })
    }

    /// Build from per-row slices; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], names: Vec<String>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::NotEnoughRows { rows: n });
        }
        let p = rows[0].len();
        let mut values = Vec::with_capacity(n * p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: p,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        DataMatrix::new(n, p, values, names)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.p + col]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, col: usize) -> &str {
        &self.names[col]
    }

    /// Column index for an exact name match.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Copy of one column.
    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, col)).collect()
    }

    /// New matrix keeping only the given columns, in the given order.
    pub fn select_columns(&self, cols: &ColumnSet) -> Result<DataMatrix> {
        cols.check_within(self.p)?;
        let mut values = Vec::with_capacity(self.n * cols.len());
        for i in 0..self.n {
            for &j in cols.iter() {
                values.push(self.get(i, j));
            }
        }
        let names = cols.iter().map(|&j| self.names[j].clone()).collect();
        DataMatrix::new(self.n, cols.len(), values, names)
    }

    /// New matrix with `other`'s columns appended on the right.
    pub fn append_columns(&self, other: &DataMatrix) -> Result<DataMatrix> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let p = self.p + other.p;
        let mut values = Vec::with_capacity(self.n * p);
        for i in 0..self.n {
            values.extend_from_slice(self.row(i));
            values.extend_from_slice(other.row(i));
        }
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        DataMatrix::new(self.n, p, values, names)
    }
}

/// Ordered list of distinct column indices into a [`DataMatrix`].
///
/// Order is preserved as given (unions append, they do not sort).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSet {
    indices: Vec<usize>,
}

impl ColumnSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        for (k, &idx) in indices.iter().enumerate() {
            if indices[..k].contains(&idx) {
                return Err(Error::DuplicateColumnIndex { index: idx });
            }
        }
        Ok(ColumnSet { indices })
    }

    /// Singleton set.
    pub fn single(index: usize) -> Self {
        ColumnSet {
            indices: alloc::vec![index],
        }
    }

    /// The contiguous range `lo..hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        ColumnSet {
            indices: (lo..hi).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, usize> {
        self.indices.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    /// Members sorted ascending; canonical form for set comparisons.
    pub fn sorted_members(&self) -> Vec<usize> {
        let mut m = self.indices.clone();
        m.sort_unstable();
        m
    }

    /// Error unless every index lies in `[0, p)`.
    pub fn check_within(&self, p: usize) -> Result<()> {
        for &idx in &self.indices {
            if idx >= p {
                return Err(Error::ColumnOutOfRange {
                    index: idx,
                    columns: p,
                });
            }
        }
        Ok(())
    }
}

/// Knobs shared by every distance-covariance computation.
///
/// `exponent` is the power applied to pairwise Euclidean distances: 1 is
/// the standard (characteristic-function-backed) statistic, 2 works on
/// squared distances. `standardize` asks the high-level drivers to center
/// and scale feature columns before any kernel work; the kernels themselves
/// never transform data. `eps` is the comparison tolerance used wherever
/// floating-point values are tested for ties, monotonicity, or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DCovConfig {
    pub exponent: f64,
    pub standardize: bool,
    pub eps: f64,
}

impl Default for DCovConfig {
    fn default() -> Self {
        DCovConfig {
            exponent: 1.0,
            standardize: false,
            eps: 1e-12,
        }
    }
}

impl DCovConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0 && self.exponent <= 2.0) {
            return Err(Error::InvalidExponent {
                value: self.exponent,
            });
        }
        let eps_valid = self.eps >= 0.0; // NaN fails this too
        if !eps_valid {
            return Err(Error::InvalidTolerance { value: self.eps });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn matrix_rejects_single_row() {
        let err = DataMatrix::new(1, 2, vec![1.0, 2.0], names(&["a", "b"])).unwrap_err();
        assert_eq!(err, Error::NotEnoughRows { rows: 1 });
    }

    #[test]
    fn matrix_rejects_zero_columns() {
        let err = DataMatrix::new(3, 0, vec![], names(&[])).unwrap_err();
        assert_eq!(err, Error::NoColumns);
    }

    #[test]
    fn matrix_rejects_non_finite() {
        let err =
            DataMatrix::new(2, 2, vec![1.0, f64::NAN, 0.0, 1.0], names(&["a", "b"])).unwrap_err();
        assert_eq!(err, Error::NonFiniteValue { row: 0, col: 1 });
    }

    #[test]
    fn matrix_rejects_duplicate_names() {
        let err = DataMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0], names(&["a", "a"])).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateColumnName {
                name: "a".to_string()
            }
        );
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![1.0, 2.0], vec![3.0]];
        let err = DataMatrix::from_rows(&rows, names(&["a", "b"])).unwrap_err();
        assert_eq!(
            err,
            Error::RaggedRow {
                row: 1,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn select_columns_preserves_order() {
        let m = DataMatrix::new(
            2,
            3,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            names(&["a", "b", "c"]),
        )
        .unwrap();
        let sub = m
            .select_columns(&ColumnSet::new(vec![2, 0]).unwrap())
            .unwrap();
        assert_eq!(sub.values(), &[3.0, 1.0, 6.0, 4.0]);
        assert_eq!(sub.column_names(), &["c".to_string(), "a".to_string()]);
    }

    #[test]
    fn column_set_rejects_duplicates() {
        let err = ColumnSet::new(vec![0, 1, 0]).unwrap_err();
        assert_eq!(err, Error::DuplicateColumnIndex { index: 0 });
    }

    #[test]
    fn column_set_range_check() {
        let s = ColumnSet::new(vec![0, 3]).unwrap();
        assert!(s.check_within(4).is_ok());
        assert_eq!(
            s.check_within(3).unwrap_err(),
            Error::ColumnOutOfRange {
                index: 3,
                columns: 3
            }
        );
    }

    #[test]
    fn config_default_and_validation() {
        let cfg = DCovConfig::default();
        assert_eq!(cfg.exponent, 1.0);
        assert_eq!(cfg.eps, 1e-12);
        assert!(!cfg.standardize);
        assert!(cfg.validate().is_ok());
        assert!(DCovConfig {
            exponent: 0.0,
            ..cfg
        }
        .validate()
        .is_err());
        assert!(DCovConfig {
            exponent: 2.5,
            ..cfg
        }
        .validate()
        .is_err());
        assert!(DCovConfig { eps: -1.0, ..cfg }.validate().is_err());
    }
}
