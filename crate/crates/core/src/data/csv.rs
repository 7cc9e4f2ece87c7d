//! Headerless comma-separated numeric matrices.
//!
//! One row per line, cells separated by commas, surrounding spaces allowed.
//! Values are written in the shortest form that parses back to the same
//! number, so a write/read cycle is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn read_csv_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<Array2<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_matrix(&text).map_err(|(line, msg)| Error::parse(path, line, msg))
}

/// Parses CSV text; `Err` carries a 1-based line number. Blank lines are
/// skipped; at least one row is required.
pub fn parse_csv_matrix<T: Scalar>(text: &str) -> std::result::Result<Array2<T>, (usize, String)> {
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for cell in line.split(',') {
            let cell = cell.trim();
            let v: T = cell
                .parse()
                .map_err(|_| (ln, format!("non-numeric cell {cell:?}")))?;
            values.push(v);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err((ln, format!("row has {count} cells, expected {w}")));
            }
            Some(_) => {}
        }
        rows += 1;
    }
    let width = width.ok_or_else(|| (1, "no data rows".to_string()))?;
    Ok(Array2::from_shape_vec((rows, width), values).expect("rectangular by construction"))
}

pub fn write_csv_matrix<T: Scalar>(m: &Array2<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for row in m.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads a single-column CSV of integer labels.
pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<i32>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        let v = cell
            .parse()
            .map_err(|_| Error::parse(path, i + 1, format!("invalid label {cell:?}")))?;
        labels.push(v);
    }
    if labels.is_empty() {
        return Err(Error::parse(path, 1, "no labels"));
    }
    Ok(labels)
}

pub fn write_labels(labels: &[i32], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels {
        let _ = writeln!(out, "{l}");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
