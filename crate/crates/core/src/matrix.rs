//! Labeled feature matrix: the sample-by-feature array every selection and
//! classification stage operates on, plus its delimited-text serialization.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Feature matrix with one class label per row.
///
/// Rows are samples in acquisition order, columns are named features. Labels
/// are integer class ids starting at 1. Storage is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeatureMatrix {
    data: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
    labels: Vec<u32>,
    names: Vec<String>,
}

impl LabeledFeatureMatrix {
    /// Build a matrix from row vectors, validating shape, finiteness and
    /// label range. Feature names default to `f1..fJ`.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<u32>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let names = (1..=n_cols).map(|j| format!("f{j}")).collect();
        Self::new(rows, labels, names)
    }

    /// Build a matrix with explicit feature names.
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<u32>, names: Vec<String>) -> Result<Self> {
        let m = Self::new_unchecked(rows, labels, names)?;
        if let Some(i) = m.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "non-finite value at row {}, column {}",
                i / m.n_cols + 1,
                i % m.n_cols + 1
            )));
        }
        Ok(m)
    }

    /// Build a matrix without the finiteness check.
    ///
    /// Shape and label validation still apply. Intended for diagnostics that
    /// deliberately plant sentinel values (for example NaN-poisoning tests
    /// that prove held-out rows are never read during selection).
    pub fn new_unchecked(rows: Vec<Vec<f64>>, labels: Vec<u32>, names: Vec<String>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::Invalid("matrix needs at least one row".into()));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::Invalid("matrix needs at least one feature column".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(Error::Invalid(format!(
                "row {} has {} values, expected {}",
                i + 1,
                rows[i].len(),
                n_cols
            )));
        }
        if labels.len() != n_rows {
            return Err(Error::Invalid(format!(
                "{} labels for {} rows",
                labels.len(),
                n_rows
            )));
        }
        if labels.contains(&0) {
            return Err(Error::Invalid("class ids start at 1".into()));
        }
        if names.len() != n_cols {
            return Err(Error::Invalid(format!(
                "{} names for {} columns",
                names.len(),
                n_cols
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate feature name {n:?}")));
            }
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            data.extend_from_slice(&r);
        }
        Ok(Self { data, n_rows, n_cols, labels, names })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    pub(crate) fn set_value(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Copy of column `j` in row order.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.value(i, j)).collect()
    }

    /// Sorted distinct class ids.
    pub fn classes(&self) -> Vec<u32> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Row indices of one class, in dataset (acquisition) order.
    pub fn class_rows(&self, label: u32) -> Vec<usize> {
        (0..self.n_rows).filter(|&i| self.labels[i] == label).collect()
    }

    /// Matrix restricted to the given columns (indices kept in given order).
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::Invalid("empty column selection".into()));
        }
        if let Some(&j) = cols.iter().find(|&&j| j >= self.n_cols) {
            return Err(Error::Invalid(format!("column index {j} out of range")));
        }
        let rows = (0..self.n_rows)
            .map(|i| cols.iter().map(|&j| self.value(i, j)).collect())
            .collect();
        let names = cols.iter().map(|&j| self.names[j].clone()).collect();
        Self::new_unchecked(rows, self.labels.clone(), names)
    }

    /// Matrix restricted to the given rows (indices kept in given order).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Invalid("empty row selection".into()));
        }
        if let Some(&i) = rows.iter().find(|&&i| i >= self.n_rows) {
            return Err(Error::Invalid(format!("row index {i} out of range")));
        }
        let data = rows.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        Self::new_unchecked(data, labels, self.names.clone())
    }

    /// Render as comma-delimited text: header of feature names plus `label`,
    /// one row per sample. Floats use the shortest round-trip form.
    pub fn to_delimited(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.names.join(","));
        out.push_str(",label\n");
        for i in 0..self.n_rows {
            for v in self.row(i) {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{}", self.labels[i]);
        }
        out
    }

    /// Write the delimited form to a file.
    pub fn write_delimited(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_delimited()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Read a matrix previously written by [`write_delimited`].
    ///
    /// [`write_delimited`]: Self::write_delimited
    pub fn read_delimited(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))?;
        let mut names: Vec<String> = header.split(',').map(str::to_string).collect();
        if names.pop().as_deref() != Some("label") {
            return Err(Error::Parse(format!(
                "{}: last header column must be \"label\"",
                path.display()
            )));
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != names.len() + 1 {
                return Err(Error::Parse(format!(
                    "{}: row {}: {} cells, expected {}",
                    path.display(),
                    lineno + 2,
                    cells.len(),
                    names.len() + 1
                )));
            }
            let mut row = Vec::with_capacity(names.len());
            for (col, cell) in cells[..names.len()].iter().enumerate() {
                row.push(cell.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "{}: row {}, column {}: {cell:?} is not numeric",
                        path.display(),
                        lineno + 2,
                        col + 1
                    ))
                })?);
            }
            labels.push(cells[names.len()].trim().parse::<u32>().map_err(|_| {
                Error::Parse(format!(
                    "{}: row {}: label {:?} is not a class id",
                    path.display(),
                    lineno + 2,
                    cells[names.len()]
                ))
            })?);
            rows.push(row);
        }
        Self::new(rows, labels, names)
    }
}
