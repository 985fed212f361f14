//! Annotation loading and ground-truth synthesis.
//!
//! One annotation file describes one page:
//!
//! ```json
//! {
//!   "metadata": { "doc_id": "p001", "doc_category": "financial_reports", "precedence": 0 },
//!   "cells": [
//!     { "id_box_line": 0, "category": "Page-header", "text": "Annual report", "box": [72, 30, 200, 12] }
//!   ]
//! }
//! ```
//!
//! `cells` may also be spelled `annotations`, and a cell's `box` may be spelled
//! `bbox`. The category may sit at the top level instead of under `metadata`.
//! The file stem is used as `doc_id` when the metadata does not carry one.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use unicode_normalization::UnicodeNormalization;

use crate::error::{EvalError, Result};
use crate::geometry::{coco_to_pascal, BoxCoco};
use crate::tokenize::{tokenize, TokenizerConfig};
use crate::types::{
    AnnotatedDocument, AnnotationCell, DocCategory, ElementLabel, GroundTruth, GtTable,
};

/// How the first two numbers of an annotation box are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BboxOrigin {
    /// `[x_center, y_center, width, height]`
    Center,
    /// `[x_left, y_top, width, height]`
    #[default]
    Topleft,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub bbox_origin: BboxOrigin,
    /// Checked against a file's `schema_version` key when the file has one.
    pub annotation_schema_version: String,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            bbox_origin: BboxOrigin::Topleft,
            annotation_schema_version: "1".to_string(),
        }
    }
}

pub fn load_annotations(path: &Path, cfg: &IngestConfig) -> Result<AnnotatedDocument> {
    let raw = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    parse_annotations(&raw, stem, cfg).map_err(|e| match e {
        EvalError::SchemaMismatch { reason, .. } => {
            EvalError::schema(path.display().to_string(), reason)
        }
        other => other,
    })
}

/// Parses annotation JSON. `fallback_doc_id` is used when the metadata has no
/// `doc_id`. Cells keep their on-disk order.
pub fn parse_annotations(
    raw: &str,
    fallback_doc_id: &str,
    cfg: &IngestConfig,
) -> Result<AnnotatedDocument> {
    let root: Value =
        serde_json::from_str(raw).map_err(|e| EvalError::schema("annotation", e.to_string()))?;
    let root = root
        .as_object()
        .ok_or_else(|| EvalError::schema("annotation", "top level is not an object"))?;
    let empty = Map::new();
    let meta = match root.get("metadata") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(EvalError::schema("metadata", "not an object")),
    };

    if let Some(v) = root
        .get("schema_version")
        .or_else(|| meta.get("schema_version"))
    {
        let found = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        if found != cfg.annotation_schema_version {
            return Err(EvalError::schema(
                "schema_version",
                format!(
                    "file has version {found}, expected {}",
                    cfg.annotation_schema_version
                ),
            ));
        }
    }

    let doc_id = match meta.get("doc_id").or_else(|| root.get("doc_id")) {
        Some(Value::String(s)) => s.nfc().collect::<String>(),
        Some(_) => return Err(EvalError::schema("doc_id", "not a string")),
        None => fallback_doc_id.to_string(),
    };
    if doc_id.is_empty() {
        return Err(EvalError::schema("doc_id", "empty document id"));
    }

    let category = ["doc_category", "category"]
        .iter()
        .find_map(|k| meta.get(*k).or_else(|| root.get(*k)))
        .ok_or_else(|| EvalError::schema("metadata", "no doc_category"))?
        .as_str()
        .ok_or_else(|| EvalError::schema("doc_category", "not a string"))?
        .parse::<DocCategory>()?;

    let page_precedence = match meta.get("precedence") {
        Some(v) => as_u64(v).ok_or_else(|| EvalError::schema("precedence", "not an integer"))?,
        None => 0,
    };

    let cells = root
        .get("cells")
        .or_else(|| root.get("annotations"))
        .ok_or_else(|| EvalError::schema("annotation", "no `cells` array"))?
        .as_array()
        .ok_or_else(|| EvalError::schema("cells", "not an array"))?;

    let mut parsed = Vec::with_capacity(cells.len());
    for (index, cell) in cells.iter().enumerate() {
        let obj = cell
            .as_object()
            .ok_or_else(|| EvalError::schema(format!("cell {index}"), "not an object"))?;
        let precedence = match obj.get("precedence") {
            Some(v) => as_u64(v).ok_or_else(|| {
                EvalError::schema(format!("cell {index}"), "precedence is not an integer")
            })?,
            None => page_precedence,
        };
        parsed.push((precedence, parse_cell(index, obj, cfg)?));
    }

    // Redundant double/triple annotations: keep only the primary set.
    let keep = parsed.iter().map(|(p, _)| *p).min().unwrap_or(0);
    let cells = parsed
        .into_iter()
        .filter(|(p, _)| *p == keep)
        .map(|(_, c)| c)
        .collect();

    Ok(AnnotatedDocument {
        doc_id,
        category,
        cells,
    })
}

fn as_u64(v: &Value) -> Option<u64> {
    v.as_u64().or_else(|| {
        v.as_f64()
            .filter(|f| *f >= 0.0 && f.fract() == 0.0)
            .map(|f| f as u64)
    })
}

fn parse_cell(
    index: usize,
    obj: &Map<String, Value>,
    cfg: &IngestConfig,
) -> Result<AnnotationCell> {
    let missing = |field| EvalError::MissingField { cell: index, field };
    let bad = |reason: &str| EvalError::schema(format!("cell {index}"), reason.to_string());

    let reading_order_id = obj
        .get("id_box_line")
        .or_else(|| obj.get("reading_order_id"))
        .ok_or_else(|| missing("id_box_line"))
        .and_then(|v| as_u64(v).ok_or_else(|| bad("id_box_line is not a non-negative integer")))?;

    let category = obj
        .get("category")
        .ok_or_else(|| missing("category"))?
        .as_str()
        .ok_or_else(|| bad("category is not a string"))?
        .parse::<ElementLabel>()?;

    let text: String = obj
        .get("text")
        .ok_or_else(|| missing("text"))?
        .as_str()
        .ok_or_else(|| bad("text is not a string"))?
        .nfc()
        .collect();

    let raw_box = obj
        .get("box")
        .or_else(|| obj.get("bbox"))
        .ok_or_else(|| missing("box"))?
        .as_array()
        .ok_or_else(|| bad("box is not an array"))?;
    let nums: Vec<f64> = raw_box.iter().filter_map(Value::as_f64).collect();
    if raw_box.len() != 4 || nums.len() != 4 {
        return Err(bad("box must be four numbers"));
    }
    let bbox = match cfg.bbox_origin {
        BboxOrigin::Center => BoxCoco::new(nums[0], nums[1], nums[2], nums[3]),
        BboxOrigin::Topleft => BoxCoco::from_top_left(nums[0], nums[1], nums[2], nums[3]),
    }
    .map_err(|e| bad(&e.to_string()))?;

    Ok(AnnotationCell {
        reading_order_id,
        category,
        text,
        bbox,
    })
}

/// Total order on cells: reading order first, then content, so the result
/// never depends on the order cells were listed in the file.
fn cell_order(a: &AnnotationCell, b: &AnnotationCell) -> Ordering {
    a.reading_order_id
        .cmp(&b.reading_order_id)
        .then_with(|| a.category.cmp(&b.category))
        .then_with(|| a.text.cmp(&b.text))
        .then_with(|| a.bbox.x_center.total_cmp(&b.bbox.x_center))
        .then_with(|| a.bbox.y_center.total_cmp(&b.bbox.y_center))
        .then_with(|| a.bbox.width.total_cmp(&b.bbox.width))
        .then_with(|| a.bbox.height.total_cmp(&b.bbox.height))
}

fn sorted_cells(doc: &AnnotatedDocument) -> Vec<&AnnotationCell> {
    let mut cells: Vec<&AnnotationCell> = doc.cells.iter().collect();
    cells.sort_by(|a, b| cell_order(a, b));
    cells
}

/// Rebuilds the page text from its annotation cells.
///
/// Cells are put in reading order with page headers hoisted to the top and
/// page footers sunk to the bottom. Neighbouring cells of the same label are
/// joined by a space and a label change starts a new line.
pub fn build_ground_truth_text(doc: &AnnotatedDocument) -> String {
    let cells = sorted_cells(doc);
    let rank = |c: &AnnotationCell| match c.category {
        ElementLabel::PageHeader => 0,
        ElementLabel::PageFooter => 2,
        _ => 1,
    };
    let mut ordered = cells;
    // stable: keeps reading order inside each band
    ordered.sort_by_key(|c| rank(c));

    let mut out = String::new();
    let mut prev: Option<ElementLabel> = None;
    for cell in ordered {
        match prev {
            None => {}
            Some(p) if p == cell.category => out.push(' '),
            Some(_) => out.push('\n'),
        }
        out.push_str(&cell.text);
        prev = Some(cell.category);
    }
    out
}

/// One table per `Table` cell, in reading order.
pub fn build_ground_truth_tables(doc: &AnnotatedDocument) -> Vec<GtTable> {
    sorted_cells(doc)
        .into_iter()
        .filter(|c| c.category == ElementLabel::Table)
        .map(|c| GtTable {
            cell_texts: c.text.split_whitespace().map(str::to_string).collect(),
            bbox: coco_to_pascal(c.bbox),
        })
        .collect()
}

pub fn build_ground_truth(doc: &AnnotatedDocument, tokenizer: &TokenizerConfig) -> GroundTruth {
    let combined_text = build_ground_truth_text(doc);
    let tokens = tokenize(&combined_text, tokenizer);
    GroundTruth {
        doc_id: doc.doc_id.clone(),
        category: doc.category,
        combined_text,
        tokens,
        tables: build_ground_truth_tables(doc),
    }
}
