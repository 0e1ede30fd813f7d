//! CSV to reliability matrix.

use std::fs::File;
use std::io::{self, Read};
use std::path::PathBuf;

use krippendorff::{MatrixError, ReliabilityMatrix};
use thiserror::Error;

/// Where and how to read the score table.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    /// File path, or `-` for standard input.
    pub path: PathBuf,
    /// Skip the first row as a header.
    pub has_header: bool,
    /// Cell contents (after trimming) treated as missing.
    pub na_tokens: Vec<String>,
    pub delimiter: char,
}

impl InputSpec {
    /// Spec with the conventional defaults: no header, comma-separated,
    /// `NA` and empty cells missing.
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            has_header: false,
            na_tokens: vec!["NA".to_string(), String::new()],
            delimiter: ',',
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path} has no data rows")]
    EmptyFile { path: String },
    #[error("row {row} has {got} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("row {row}, column {column}: cannot parse {content:?} as a finite number")]
    UnparseableCell {
        row: usize,
        column: usize,
        content: String,
    },
    #[error("delimiter must be a single ASCII character, got {0:?}")]
    BadDelimiter(char),
    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Reads the score table. Row and column numbers in errors are 1-based and
/// count physical lines, header included.
pub fn ingest(spec: &InputSpec) -> Result<ReliabilityMatrix, IngestError> {
    if !spec.delimiter.is_ascii() {
        return Err(IngestError::BadDelimiter(spec.delimiter));
    }
    let label = if spec.path.as_os_str() == "-" {
        "<stdin>".to_string()
    } else {
        spec.path.display().to_string()
    };
    let reader: Box<dyn Read> = if spec.path.as_os_str() == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(&spec.path).map_err(|source| IngestError::Io {
            path: label.clone(),
            source,
        })?)
    };
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .delimiter(spec.delimiter as u8)
        .flexible(true)
        .from_reader(reader);

    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    let mut expected_width: Option<usize> = None;
    for (index, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|source| IngestError::Csv {
            path: label.clone(),
            source,
        })?;
        let row = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(index + 1);
        match expected_width {
            None => expected_width = Some(record.len()),
            Some(expected) if record.len() != expected => {
                return Err(IngestError::RaggedRows {
                    row,
                    got: record.len(),
                    expected,
                });
            }
            _ => {}
        }
        let mut cells = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            let trimmed = cell.trim();
            if spec.na_tokens.iter().any(|t| t == trimmed) {
                cells.push(None);
                continue;
            }
            let value = trimmed
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IngestError::UnparseableCell {
                    row,
                    column: col + 1,
                    content: cell.to_string(),
                })?;
            cells.push(Some(value));
        }
        rows.push(cells);
    }
    if rows.is_empty() {
        return Err(IngestError::EmptyFile { path: label });
    }
    Ok(ReliabilityMatrix::from_rows(&rows)?)
}
