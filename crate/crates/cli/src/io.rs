//! CSV ingestion: header required, UTF-8, comma delimiter, '.' decimal.
//!
//! Cells are trimmed, then parsed as f64; anything non-finite (including
//! "NaN" and "inf") is rejected with its file line and column name. Line
//! numbers are 1-based file lines, so the first data row is line 2.

use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, Trim};
use dcsel_core::{ColumnSet, DataMatrix};

use crate::error::{CliError, Result};

/// Read every column of a headered CSV into one matrix.
pub fn load_csv_all(path: &Path) -> Result<DataMatrix> {
    let shown = path.display().to_string();
    let file = File::open(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .from_reader(file);

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Csv {
            path: shown.clone(),
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(CliError::MissingHeader { path: shown });
    }
    for (j, name) in headers.iter().enumerate() {
        if headers[..j].contains(name) {
            return Err(CliError::DuplicateHeader {
                path: shown,
                name: name.clone(),
            });
        }
    }

    let p = headers.len();
    let mut values: Vec<f64> = Vec::new();
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                pos,
                expected_len,
                len,
            } => CliError::RaggedRecord {
                path: shown.clone(),
                line: pos.as_ref().map_or(0, |p| p.line()),
                expected: *expected_len as usize,
                got: *len as usize,
            },
            _ => CliError::Csv {
                path: shown.clone(),
                message: e.to_string(),
            },
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != p {
            return Err(CliError::RaggedRecord {
                path: shown,
                line,
                expected: p,
                got: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let parsed: Option<f64> = cell.parse().ok().filter(|v: &f64| v.is_finite());
            match parsed {
                Some(v) => values.push(v),
                None => {
                    return Err(CliError::NonNumericCell {
                        path: shown,
                        line,
                        column: headers[j].clone(),
                        value: cell.to_owned(),
                    })
                }
            }
        }
        rows += 1;
    }
    if rows < 2 {
        return Err(CliError::TooFewRows { path: shown, rows });
    }

    DataMatrix::new(rows, p, values, headers).map_err(CliError::Core)
}

/// Resolve a comma-separated list of column names (or 0-based indices) against
/// a matrix header. Names win over indices when a header is itself numeric.
pub fn resolve_columns(data: &DataMatrix, spec: &str, flag: &'static str) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let idx = match data.column_index(token) {
            Some(i) => i,
            None => token
                .parse::<usize>()
                .ok()
                .filter(|&i| i < data.n_cols())
                .ok_or_else(|| CliError::UnknownColumn {
                    name: token.to_owned(),
                })?,
        };
        if out.contains(&idx) {
            return Err(CliError::DuplicateColumn {
                name: token.to_owned(),
            });
        }
        out.push(idx);
    }
    if out.is_empty() {
        return Err(CliError::EmptyColumnList { flag });
    }
    Ok(out)
}

/// Split a headered CSV into a feature matrix and a response matrix.
///
/// Response columns are taken in the order the spec lists them; the features
/// keep their original file order. Multi-response specs ("y1,y2") yield a
/// multi-column response matrix.
pub fn load_csv(path: &Path, response_spec: &str) -> Result<(DataMatrix, DataMatrix)> {
    let full = load_csv_all(path)?;
    let resp_idx = resolve_columns(&full, response_spec, "--response")?;
    let feat_idx: Vec<usize> = (0..full.n_cols())
        .filter(|j| !resp_idx.contains(j))
        .collect();
    if feat_idx.is_empty() {
        return Err(CliError::NoFeaturesLeft);
    }
    let features = full.select_columns(&ColumnSet::new(feat_idx)?)?;
    let response = full.select_columns(&ColumnSet::new(resp_idx)?)?;
    Ok((features, response))
}
