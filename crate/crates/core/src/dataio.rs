//! Point-cloud loading, validation and normalization.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("file not found: {0}")]
    MissingFile(String),
    #[error("cannot parse value at row {row}, column `{column}`")]
    ParseError { row: usize, column: String },
    #[error("missing value at row {row}, column `{column}`")]
    MissingValue { row: usize, column: String },
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dataset has no numeric columns")]
    NoFeatures,
    #[error("labels have length {labels}, expected {points}")]
    LabelLength { labels: usize, points: usize },
    #[error("all points are zero; cannot normalize")]
    AllZeroPoints,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `n` points in `d` dimensions, optionally labelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
    name: String,
}

impl PointCloud {
    pub fn new(
        points: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
        name: impl Into<String>,
    ) -> Result<Self, DataError> {
        let Some(first) = points.first() else {
            return Err(DataError::EmptyDataset);
        };
        let d = first.len();
        if d == 0 {
            return Err(DataError::NoFeatures);
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(DataError::RaggedRows {
                    row: row + 1,
                    expected: d,
                    found: p.len(),
                });
            }
            if let Some(c) = p.iter().position(|v| !v.is_finite()) {
                return Err(DataError::ParseError {
                    row: row + 1,
                    column: format!("x{}", c + 1),
                });
            }
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(DataError::LabelLength {
                    labels: l.len(),
                    points: points.len(),
                });
            }
        }
        Ok(PointCloud {
            points,
            labels,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, DataError> {
        if labels.len() != self.points.len() {
            return Err(DataError::LabelLength {
                labels: labels.len(),
                points: self.points.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Mean Euclidean norm of the rows.
    pub fn mean_norm(&self) -> f64 {
        let total: f64 = self.points.iter().map(|p| norm(p)).sum();
        total / self.points.len() as f64
    }

    /// Applies `f` to every point, keeping labels and name.
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self, DataError> {
        PointCloud::new(
            self.points.iter().map(|p| f(p)).collect(),
            self.labels.clone(),
            self.name.clone(),
        )
    }

    /// Distinct labels in order of first appearance.
    pub fn classes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for l in self.labels.iter().flatten() {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        out
    }
}

pub(crate) fn norm(p: &[f64]) -> f64 {
    p.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Reads a headered CSV. Every column except `label_column` must be numeric.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<PointCloud, DataError> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DataError::MissingFile(path.display().to_string()),
        _ => DataError::Io(e),
    })?;
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv(&text, label_column, name)
}

/// Parses CSV text; see [`load_csv`].
pub fn parse_csv(
    text: &str,
    label_column: Option<&str>,
    name: impl Into<String>,
) -> Result<PointCloud, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let label_idx = match label_column {
        Some(col) => Some(
            header
                .iter()
                .position(|h| h == col)
                .ok_or_else(|| DataError::MissingColumn(col.to_owned()))?,
        ),
        None => None,
    };
    if header.len() == usize::from(label_idx.is_some()) {
        return Err(DataError::NoFeatures);
    }

    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                expected_len, len, ..
            } => DataError::RaggedRows {
                row,
                expected: *expected_len as usize,
                found: *len as usize,
            },
            _ => DataError::Csv(e),
        })?;
        let mut p = Vec::with_capacity(header.len());
        for (c, field) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                labels.push(field.to_owned());
                continue;
            }
            if field.is_empty() {
                return Err(DataError::MissingValue {
                    row,
                    column: header[c].clone(),
                });
            }
            let v: f64 = field.parse().map_err(|_| DataError::ParseError {
                row,
                column: header[c].clone(),
            })?;
            if !v.is_finite() {
                return Err(DataError::ParseError {
                    row,
                    column: header[c].clone(),
                });
            }
            p.push(v);
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    PointCloud::new(points, label_idx.map(|_| labels), name)
}

/// Writes `x1..xd[,label]` with shortest round-trip float formatting.
pub fn write_csv<W: Write>(pc: &PointCloud, out: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=pc.dim()).map(|i| format!("x{i}")).collect();
    if pc.labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, p) in pc.points.iter().enumerate() {
        let mut rec: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = &pc.labels {
            rec.push(l[i].clone());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_csv(pc: &PointCloud, path: impl AsRef<Path>) -> Result<(), DataError> {
    write_csv(pc, File::create(path)?)
}

/// Divides every coordinate by the mean row norm so the new mean norm is 1.
pub fn normalize(pc: &PointCloud) -> Result<PointCloud, DataError> {
    let scale = pc.mean_norm();
    if scale == 0.0 {
        return Err(DataError::AllZeroPoints);
    }
    pc.map_points(|p| p.iter().map(|v| v / scale).collect())
}

/// Reads one numeric column (the named one, or the first) of a headered CSV.
pub fn load_column(path: impl AsRef<Path>, column: Option<&str>) -> Result<Vec<f64>, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DataError::MissingFile(path.display().to_string()),
        _ => DataError::Io(e),
    })?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let idx = match column {
        None => 0,
        Some(c) => header
            .iter()
            .position(|h| h == c)
            .ok_or_else(|| DataError::MissingColumn(c.to_owned()))?,
    };
    let col_name = header.get(idx).cloned().ok_or(DataError::NoFeatures)?;
    let mut out = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = rec.get(idx).unwrap_or("");
        if field.is_empty() {
            return Err(DataError::MissingValue {
                row: r + 1,
                column: col_name,
            });
        }
        out.push(field.parse::<f64>().map_err(|_| DataError::ParseError {
            row: r + 1,
            column: col_name.clone(),
        })?);
    }
    if out.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    Ok(out)
}
