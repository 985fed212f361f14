//! The per-(tool, document) extraction record exchanged with extractor
//! drivers. One file lives at `<results_dir>/<tool>/<doc_id>.json`:
//!
//! ```json
//! { "doc_id": "p001", "tool": "pymupdf", "text": "...",
//!   "tables": [ { "cells": ["a", "b"], "bbox": [0, 0, 10, 5] } ] }
//! ```
//!
//! `bbox` is `null` for tools without geometry. Drivers that fail on a
//! document write the record with empty content and an `error` string.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{EvalError, Result};
use crate::geometry::BoxPascal;
use crate::types::{ExtractedTable, ExtractionResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterchangeTable {
    pub cells: Vec<String>,
    pub bbox: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterchangeRecord {
    pub doc_id: String,
    pub tool: String,
    pub text: String,
    pub tables: Vec<InterchangeTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InterchangeRecord {
    pub fn from_result(r: &ExtractionResult) -> Self {
        InterchangeRecord {
            doc_id: r.doc_id.clone(),
            tool: r.tool_name.clone(),
            text: r.text.clone(),
            tables: r
                .tables
                .iter()
                .map(|t| InterchangeTable {
                    cells: t.cell_texts.clone(),
                    bbox: t.bbox.map(BoxPascal::to_array),
                })
                .collect(),
            error: None,
        }
    }

    /// Validated, NFC-normalized extraction result.
    pub fn into_result(self) -> Result<ExtractionResult> {
        let tables = self
            .tables
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                let bbox = t
                    .bbox
                    .map(BoxPascal::from_array)
                    .transpose()
                    .map_err(|e| EvalError::schema(format!("table {i}"), e.to_string()))?;
                Ok(ExtractedTable {
                    cell_texts: t.cells.iter().map(|c| c.nfc().collect()).collect(),
                    bbox,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtractionResult {
            doc_id: self.doc_id,
            tool_name: self.tool,
            text: self.text.nfc().collect(),
            tables,
        })
    }
}

pub fn result_path(results_dir: &Path, tool: &str, doc_id: &str) -> PathBuf {
    results_dir.join(tool).join(format!("{doc_id}.json"))
}

/// Why a document has no usable extraction.
#[derive(Debug)]
pub enum ExtractionFailure {
    Missing,
    ToolError(String),
    Invalid(EvalError),
}

/// Loads the record for `(tool, doc_id)`, checking that it describes that
/// pair.
pub fn read_extraction(
    results_dir: &Path,
    tool: &str,
    doc_id: &str,
) -> std::result::Result<ExtractionResult, ExtractionFailure> {
    let path = result_path(results_dir, tool, doc_id);
    let raw = match fs::read_to_string(&path) {
        Ok(raw) => raw,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(ExtractionFailure::Missing)
        }
        Err(e) => return Err(ExtractionFailure::Invalid(EvalError::io(&path, e))),
    };
    let ctx = || path.display().to_string();
    let rec: InterchangeRecord = serde_json::from_str(&raw)
        .map_err(|e| ExtractionFailure::Invalid(EvalError::schema(ctx(), e.to_string())))?;
    if let Some(err) = rec.error {
        return Err(ExtractionFailure::ToolError(err));
    }
    if rec.doc_id != doc_id || rec.tool != tool {
        return Err(ExtractionFailure::Invalid(EvalError::schema(
            ctx(),
            format!(
                "record is for ({}, {}), expected ({tool}, {doc_id})",
                rec.tool, rec.doc_id
            ),
        )));
    }
    rec.into_result().map_err(ExtractionFailure::Invalid)
}

pub fn write_extraction(results_dir: &Path, result: &ExtractionResult) -> Result<PathBuf> {
    let path = result_path(results_dir, &result.tool_name, &result.doc_id);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| EvalError::io(dir, e))?;
    }
    let body = serde_json::to_string_pretty(&InterchangeRecord::from_result(result))
        .expect("interchange records always serialize");
    fs::write(&path, body + "\n").map_err(|e| EvalError::io(&path, e))?;
    Ok(path)
}
