//! CSV input and float formatting.
//!
//! Files are comma separated, row major, without a header unless `--header` is
//! given. A vector file may hold one value per line or all values on one row.

use std::path::Path;

use ndarray::Array2;

use crate::error::CliError;

fn reader(path: &Path, header: bool) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io(path, io),
            other => CliError::Parse(format!("{}: {other:?}", path.display())),
        })
}

fn parse_field(path: &Path, row: usize, field: &str) -> Result<f64, CliError> {
    let v = field.parse::<f64>().map_err(|_| {
        CliError::Parse(format!(
            "{}: row {}: not a number: {field:?}",
            path.display(),
            row + 1
        ))
    })?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!(
            "{}: row {}: non-finite value {field:?}",
            path.display(),
            row + 1
        )));
    }
    Ok(v)
}

fn read_rows(path: &Path, header: bool) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rows = Vec::new();
    for (i, record) in reader(path, header)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| parse_field(path, i, f))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_matrix(path: &Path, header: bool) -> Result<Array2<f64>, CliError> {
    let rows = read_rows(path, header)?;
    let Some(first) = rows.first() else {
        return Err(CliError::Parse(format!("{}: no data", path.display())));
    };
    let cols = first.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
        return Err(CliError::Dimension(format!(
            "{}: row {} has {} columns, expected {cols}",
            path.display(),
            bad + 1,
            rows[bad].len()
        )));
    }
    let m = rows.len();
    Array2::from_shape_vec((m, cols), rows.into_iter().flatten().collect())
        .map_err(|e| CliError::Dimension(e.to_string()))
}

pub fn read_vector(path: &Path, header: bool) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = read_rows(path, header)?.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(CliError::Parse(format!("{}: no data", path.display())));
    }
    Ok(values)
}

/// Shortest representation that parses back to the same bits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

pub fn format_vector(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&fmt_float(*v));
        out.push('\n');
    }
    out
}
