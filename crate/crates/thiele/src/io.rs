//! Sample CSV ingestion, model JSON persistence and study CSV output.
//!
//! Models are stored as JSON documents whose numbers are decimal strings in
//! shortest round-trip form, so files are diffable and reload bit-exact.
//! The sample reader accepts a `x,f` header or two bare numeric columns,
//! UTF-8, with `#` comment lines.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::FitConfig;
use crate::model::{ModelError, ThieleModel};
use crate::newman::NewmanStudyRow;
use crate::sample::{SampleError, SampleSet};

/// Schema version written by [`write_model`] and accepted by [`read_model`].
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Errors from the readers. Malformed input never panics; every failure
/// carries the 1-based line where it was detected when one applies.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: non-finite value")]
    NonFiniteValue { line: usize },
    #[error("duplicate abscissa x = {x}")]
    DuplicateAbscissa { x: f64 },
    #[error("unsupported model format version {found}, expected {MODEL_FORMAT_VERSION}")]
    VersionMismatch { found: u32 },
    #[error("model document invalid: {reason}")]
    Schema { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Fit settings and provenance carried alongside a stored model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub tool_version: String,
    pub tol: f64,
    pub max_order: Option<usize>,
    pub stopped_early: bool,
}

impl ModelMetadata {
    pub fn new(cfg: &FitConfig, stopped_early: bool) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tol: cfg.tol,
            max_order: cfg.max_order,
            stopped_early,
        }
    }
}

/// On-disk model schema: nodes and coefficients as decimal strings that
/// parse back to the exact doubles they were written from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: u32,
    pub nodes: Vec<String>,
    pub coeffs: Vec<String>,
    pub metadata: ModelMetadata,
}

impl ModelDocument {
    pub fn from_model(model: &ThieleModel, metadata: ModelMetadata) -> Self {
        Self {
            format_version: MODEL_FORMAT_VERSION,
            nodes: model.nodes().iter().map(|v| v.to_string()).collect(),
            coeffs: model.coeffs().iter().map(|v| v.to_string()).collect(),
            metadata,
        }
    }
}

/// Reads interpolation samples from CSV.
///
/// The first non-comment line may be the header `x,f`; otherwise every line
/// holds two comma-separated numbers. Blank lines and lines starting with
/// `#` are skipped. Duplicate abscissae and non-finite values are rejected.
pub fn read_samples<R: Read>(mut source: R) -> Result<SampleSet, IoError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => IoError::Parse {
                line: 0,
                reason: "input is not valid UTF-8".to_string(),
            },
            _ => IoError::Io(e),
        })?;

    let mut xs = Vec::new();
    let mut fs = Vec::new();
    let mut lines_of_rows = Vec::new();
    let mut first_row = true;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',').map(str::trim);
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(IoError::Parse {
                    line,
                    reason: "expected exactly two comma-separated columns".to_string(),
                })
            }
        };
        if first_row {
            first_row = false;
            if a == "x" && b == "f" {
                continue;
            }
        }
        let x: f64 = a.parse().map_err(|_| IoError::Parse {
            line,
            reason: format!("cannot parse {a:?} as a number"),
        })?;
        let f: f64 = b.parse().map_err(|_| IoError::Parse {
            line,
            reason: format!("cannot parse {b:?} as a number"),
        })?;
        xs.push(x);
        fs.push(f);
        lines_of_rows.push(line);
    }

    SampleSet::new(xs, fs).map_err(|e| match e {
        SampleError::Empty => IoError::Parse { line: 0, reason: "no data rows".to_string() },
        SampleError::DuplicateAbscissa { x } => IoError::DuplicateAbscissa { x },
        SampleError::NonFiniteAbscissa { index } | SampleError::NonFiniteValue { index } => {
            IoError::NonFiniteValue { line: lines_of_rows[index] }
        }
        SampleError::LengthMismatch { .. } => unreachable!("rows are pushed pairwise"),
    })
}

/// Writes `model` as a version-1 JSON document. Node and coefficient
/// strings round-trip bit-exact through [`read_model`].
pub fn write_model<W: Write>(
    model: &ThieleModel,
    metadata: ModelMetadata,
    mut sink: W,
) -> Result<(), IoError> {
    let doc = ModelDocument::from_model(model, metadata);
    let json = serde_json::to_string_pretty(&doc).expect("document serializes");
    sink.write_all(json.as_bytes())?;
    sink.write_all(b"\n")?;
    Ok(())
}

/// Parses a model document, checking the format version and rebuilding the
/// validated model.
pub fn read_model<R: Read>(source: R) -> Result<(ThieleModel, ModelMetadata), IoError> {
    let doc: ModelDocument = serde_json::from_reader(source)
        .map_err(|e| IoError::Schema { reason: e.to_string() })?;
    if doc.format_version != MODEL_FORMAT_VERSION {
        return Err(IoError::VersionMismatch { found: doc.format_version });
    }
    let parse_all = |strings: &[String], what: &str| -> Result<Vec<f64>, IoError> {
        strings
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| IoError::Schema {
                    reason: format!("cannot parse {what} {s:?} as a number"),
                })
            })
            .collect()
    };
    let nodes = parse_all(&doc.nodes, "node")?;
    let coeffs = parse_all(&doc.coeffs, "coefficient")?;
    let model = ThieleModel::new(nodes, coeffs).map_err(|e: ModelError| IoError::Schema {
        reason: e.to_string(),
    })?;
    Ok((model, doc.metadata))
}

/// Header of the study CSV.
pub const STUDY_CSV_HEADER: &str = "n,eta,order,sup_err,node_err_2norm,poles,stopped_early";

/// Emits study rows as CSV, one line per row after the header, floats in
/// shortest round-trip form.
pub fn write_study_csv<W: Write>(rows: &[NewmanStudyRow], mut sink: W) -> Result<(), IoError> {
    writeln!(sink, "{STUDY_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            sink,
            "{},{},{},{},{},{},{}",
            r.n, r.eta, r.order, r.sup_err, r.node_err_2norm, r.poles_in_unit_interval,
            r.stopped_early
        )?;
    }
    Ok(())
}
