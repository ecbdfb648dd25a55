//! Readers for the three input formats.

use std::fs;
use std::path::Path;

use fitmetrics::ConfusionMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Non-empty records with their 1-based line numbers.
fn records(text: &str) -> Result<Vec<(u64, Vec<String>)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn is_number(cell: &str) -> bool {
    cell.parse::<f64>().is_ok()
}

pub fn parse_matrix_csv(path: &Path) -> Result<ConfusionMatrix, CliError> {
    parse_matrix_csv_str(&read(path)?)
}

/// Square numeric grid, rows = true class. An optional first row and/or
/// first column of labels is recognized by its non-numeric cells; without
/// labels the classes are named `class_0 … class_{n−1}`.
pub fn parse_matrix_csv_str(text: &str) -> Result<ConfusionMatrix, CliError> {
    let mut rows = records(text)?;
    if rows.is_empty() {
        return Err(CliError::Input("empty file".into()));
    }
    // A labelled data row has numbers after its first cell; a header does not.
    let first = &rows[0].1;
    let header = if first[1..].iter().any(|c| !is_number(c)) || (first.len() == 1 && !is_number(&first[0])) {
        Some(rows.remove(0))
    } else {
        None
    };
    if rows.is_empty() {
        return Err(CliError::Input("no data rows".into()));
    }
    let row_labelled = !is_number(&rows[0].1[0]);
    let width = rows[0].1.len() - usize::from(row_labelled);

    let mut grid = Vec::with_capacity(rows.len());
    let mut row_labels = Vec::new();
    for (line, cells) in &rows {
        let (label, numeric) = if row_labelled {
            (Some(cells[0].clone()), &cells[1..])
        } else {
            (None, &cells[..])
        };
        if numeric.len() != width {
            return Err(CliError::Input(format!(
                "ragged row at line {line}: expected {width} cells, found {}",
                numeric.len()
            )));
        }
        let mut values = Vec::with_capacity(width);
        for (k, cell) in numeric.iter().enumerate() {
            let column = k + 1 + usize::from(row_labelled);
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Input(format!("non-numeric cell {cell:?} at line {line}, column {column}"))
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(CliError::Input(format!(
                    "negative or non-finite cell {cell:?} at line {line}, column {column}"
                )));
            }
            values.push(v);
        }
        row_labels.extend(label);
        grid.push(values);
    }

    let n = grid.len();
    if n != width {
        return Err(CliError::Input(format!("matrix is not square: {n} rows, {width} columns")));
    }
    let labels: Vec<String> = match header {
        Some((line, cells)) => {
            let skip = cells.len().saturating_sub(width);
            if cells.len() != width && !(row_labelled && cells.len() == width + 1) {
                return Err(CliError::Input(format!(
                    "header at line {line} has {} labels for {width} columns",
                    cells.len()
                )));
            }
            let labels: Vec<String> = cells[skip..].to_vec();
            if row_labelled && row_labels != labels {
                return Err(CliError::Input(format!(
                    "row labels {row_labels:?} do not match header labels {labels:?}"
                )));
            }
            labels
        }
        None if row_labelled => row_labels,
        None => (0..n).map(|i| format!("class_{i}")).collect(),
    };
    ConfusionMatrix::from_real_counts(&grid, &labels).map_err(CliError::from_matrix)
}

pub fn parse_pairs_csv(path: &Path) -> Result<ConfusionMatrix, CliError> {
    parse_pairs_csv_str(&read(path)?)
}

/// Two columns `true,predicted`, one sample per line, optional header.
pub fn parse_pairs_csv_str(text: &str) -> Result<ConfusionMatrix, CliError> {
    let mut rows = records(text)?;
    if rows.is_empty() {
        return Err(CliError::Input("empty file".into()));
    }
    let first = &rows[0].1;
    if first.len() == 2
        && first[0].eq_ignore_ascii_case("true")
        && first[1].eq_ignore_ascii_case("predicted")
    {
        rows.remove(0);
    }
    if rows.is_empty() {
        return Err(CliError::Input("empty file: header without samples".into()));
    }
    let mut truth = Vec::with_capacity(rows.len());
    let mut predicted = Vec::with_capacity(rows.len());
    for (line, cells) in rows {
        if cells.len() != 2 {
            return Err(CliError::Input(format!(
                "expected 2 columns (true,predicted) at line {line}, found {}",
                cells.len()
            )));
        }
        let mut cells = cells.into_iter();
        truth.extend(cells.next());
        predicted.extend(cells.next());
    }
    ConfusionMatrix::from_label_pairs(&truth, &predicted).map_err(CliError::from_matrix)
}

/// Matrix block shared by the JSON input and the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub counts: Vec<Vec<serde_json::Number>>,
}

impl MatrixBlock {
    pub fn from_matrix(cm: &ConfusionMatrix) -> Self {
        Self {
            labels: Some(cm.labels().to_vec()),
            counts: cm.rows().iter().map(|r| r.iter().map(|&c| crate::report::json_number(c)).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ConfusionMatrix, CliError> {
        let grid: Vec<Vec<f64>> = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, c)| {
                        c.as_f64().ok_or_else(|| CliError::Input(format!("non-numeric cell at ({i}, {j})")))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (0..grid.len()).map(|i| format!("class_{i}")).collect(),
        };
        ConfusionMatrix::from_real_counts(&grid, &labels).map_err(CliError::from_matrix)
    }
}

pub fn parse_json(path: &Path) -> Result<ConfusionMatrix, CliError> {
    parse_json_str(&read(path)?)
}

/// Either a bare `{"labels": [...], "counts": [[...]]}` block or any object
/// carrying one under `"matrix"`, such as a previous JSON report.
pub fn parse_json_str(text: &str) -> Result<ConfusionMatrix, CliError> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
    if let Some(inner) = value.get_mut("matrix") {
        value = inner.take();
    }
    let block: MatrixBlock =
        serde_json::from_value(value).map_err(|e| CliError::Input(format!("invalid matrix block: {e}")))?;
    block.to_matrix()
}
