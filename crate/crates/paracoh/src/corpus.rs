//! Labeled paragraph corpora and extracted feature matrices.
//!
//! A corpus is stored as UTF-8 JSON Lines: one record per line with fields
//! `id`, `text`, optional `label` (`"human"` or `"machine"`) and optional
//! `language`. Paragraph text can contain arbitrary punctuation, so a
//! self-escaping record format is used instead of delimited columns.
//!
//! Feature matrices are plain comma-separated text with the fixed header
//! `id,label,<NAME>,...`. Values are printed with 17 significant digits so
//! that write followed by load reproduces the matrix bit-exactly.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::util::format_exact;

/// Who produced a paragraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human,
    Machine,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Human => "human",
            Label::Machine => "machine",
        }
    }

    pub fn parse(s: &str) -> Result<Label, CorpusError> {
        match s {
            "human" => Ok(Label::Human),
            "machine" => Ok(Label::Machine),
            other => Err(CorpusError::UnknownLabel {
                label: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One input paragraph, optionally labeled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledParagraph {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

/// An ordered collection of paragraphs with distinct ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub entries: Vec<LabeledParagraph>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One row of a feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub label: Option<Label>,
    pub values: Vec<f64>,
}

/// Dense feature matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate paragraph id {id:?} (line {line})")]
    DuplicateId { id: String, line: usize },
    #[error("unknown label {label:?} (expected \"human\" or \"machine\")")]
    UnknownLabel { label: String },
    #[error("line {line}: paragraph {id:?} has no non-whitespace text")]
    EmptyText { id: String, line: usize },
    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error("invalid feature matrix: {0}")]
    InvalidMatrix(String),
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Loads a JSON-Lines corpus, preserving record order.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_corpus(&raw)
}

/// Parses corpus records from already-read JSON-Lines text.
pub fn parse_corpus(raw: &str) -> Result<Corpus, CorpusError> {
    let mut entries = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in raw.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: LabeledParagraph =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedLine {
                line: lineno,
                message: e.to_string(),
            })?;
        if record.text.trim().is_empty() {
            return Err(CorpusError::EmptyText {
                id: record.id,
                line: lineno,
            });
        }
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                id: record.id,
                line: lineno,
            });
        }
        entries.push(record);
    }
    Ok(Corpus { entries })
}

/// Writes a corpus as JSON Lines; `load_corpus` restores it exactly.
pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    for entry in &corpus.entries {
        let line = serde_json::to_string(entry).expect("paragraph serializes");
        writeln!(out, "{line}").map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

fn validate_cell(kind: &str, value: &str, row: usize) -> Result<(), CorpusError> {
    if value.contains(',') || value.contains('\n') || value.contains('\r') {
        return Err(CorpusError::BadRow {
            row,
            message: format!("{kind} {value:?} contains a delimiter character"),
        });
    }
    Ok(())
}

fn validate_matrix(matrix: &FeatureMatrix) -> Result<(), CorpusError> {
    for (i, name) in matrix.feature_names.iter().enumerate() {
        if name.is_empty() {
            return Err(CorpusError::InvalidMatrix(format!(
                "feature {i} has an empty name"
            )));
        }
        validate_cell("feature name", name, 0)?;
    }
    for (i, row) in matrix.rows.iter().enumerate() {
        let rowno = i + 1;
        if row.values.len() != matrix.feature_names.len() {
            return Err(CorpusError::BadRow {
                row: rowno,
                message: format!(
                    "row has {} values but the header names {} features",
                    row.values.len(),
                    matrix.feature_names.len()
                ),
            });
        }
        validate_cell("id", &row.id, rowno)?;
        if let Some(v) = row.values.iter().find(|v| !v.is_finite()) {
            return Err(CorpusError::BadRow {
                row: rowno,
                message: format!("non-finite value {v}"),
            });
        }
    }
    Ok(())
}

/// Writes a feature matrix as CSV. The matrix is validated first so that a
/// failed call never leaves a truncated file behind a passing one.
pub fn write_feature_matrix(
    matrix: &FeatureMatrix,
    path: impl AsRef<Path>,
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    validate_matrix(matrix)?;
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let mut header = String::from("id,label");
    for name in &matrix.feature_names {
        header.push(',');
        header.push_str(name);
    }
    writeln!(out, "{header}").map_err(|e| io_err(path, e))?;
    for row in &matrix.rows {
        let mut line = String::with_capacity(16 + 24 * row.values.len());
        line.push_str(&row.id);
        line.push(',');
        if let Some(label) = row.label {
            line.push_str(label.as_str());
        }
        for v in &row.values {
            line.push(',');
            line.push_str(&format_exact(*v));
        }
        writeln!(out, "{line}").map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// Loads a feature matrix written by [`write_feature_matrix`].
pub fn load_feature_matrix(path: impl AsRef<Path>) -> Result<FeatureMatrix, CorpusError> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = raw.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CorpusError::InvalidMatrix("empty file: missing header row".to_string()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("id") || cols.next() != Some("label") {
        return Err(CorpusError::InvalidMatrix(format!(
            "header must start with \"id,label\", got {header:?}"
        )));
    }
    let feature_names: Vec<String> = cols.map(str::to_string).collect();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let rowno = idx + 1; // 1-based line number in the file
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != feature_names.len() + 2 {
            return Err(CorpusError::BadRow {
                row: rowno,
                message: format!(
                    "expected {} cells, found {}",
                    feature_names.len() + 2,
                    cells.len()
                ),
            });
        }
        let label = if cells[1].is_empty() {
            None
        } else {
            Some(Label::parse(cells[1]).map_err(|e| CorpusError::BadRow {
                row: rowno,
                message: e.to_string(),
            })?)
        };
        let mut values = Vec::with_capacity(feature_names.len());
        for cell in &cells[2..] {
            let v: f64 = cell.parse().map_err(|_| CorpusError::BadRow {
                row: rowno,
                message: format!("cell {cell:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(CorpusError::BadRow {
                    row: rowno,
                    message: format!("cell {cell:?} is not finite"),
                });
            }
            values.push(v);
        }
        rows.push(FeatureRow {
            id: cells[0].to_string(),
            label,
            values,
        });
    }
    Ok(FeatureMatrix {
        feature_names,
        rows,
    })
}
