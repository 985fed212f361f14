//! Corpus-scale evaluation: pair ground truth with extraction records,
//! score every sampled document and fold the scores into one row per
//! category and tool.

pub mod config;
pub mod interchange;
pub mod report;
pub mod sample;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{Aggregation, Mode, ReportFormat, RunConfig};
pub use interchange::{read_extraction, write_extraction, ExtractionFailure};
pub use report::{emit_report, read_reports, render_report};
pub use sample::sample_balanced;

use crate::error::{EvalError, Result};
use crate::ingest::{build_ground_truth, load_annotations, IngestConfig};
use crate::metrics::{evaluate_text, TextEvaluation, TokenPrf};
use crate::table::{match_tables_bbox, match_tables_text_with};
use crate::types::{
    f1_score, ratio, AnnotatedDocument, DetectionReport, DocCategory, GroundTruth, MatchReport,
};

/// One row of the final report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryReport {
    pub category: DocCategory,
    /// Tool name, suffixed `@<pct>` for IoU-threshold rows.
    pub tool: String,
    /// Documents in the sample, failed ones included.
    pub n_docs: usize,
    /// Documents whose extraction record was missing, unreadable or
    /// error-tagged; they contribute zeros.
    pub n_failed: usize,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bleu4: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_alignment: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_positives: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub false_positives: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub false_negatives: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Text(TextEvaluation),
    Table(DetectionReport),
}

/// Score of one document for one report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentScore {
    pub doc_id: String,
    pub category: DocCategory,
    pub tool: String,
    pub failure: Option<String>,
    pub outcome: Outcome,
}

/// Every `*.json` annotation file in `dir`, sorted by `doc_id`.
pub fn load_corpus(dir: &Path, cfg: &IngestConfig) -> Result<Vec<AnnotatedDocument>> {
    let entries = fs::read_dir(dir).map_err(|e| EvalError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| EvalError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut docs = paths
        .par_iter()
        .map(|p| load_annotations(p, cfg))
        .collect::<Result<Vec<_>>>()?;
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let mut seen = HashSet::new();
    for d in &docs {
        if !seen.insert(d.doc_id.as_str()) {
            return Err(EvalError::schema(
                dir.display().to_string(),
                format!("duplicate doc_id `{}`", d.doc_id),
            ));
        }
    }
    Ok(docs)
}

fn threshold_label(tool: &str, threshold: f64) -> String {
    let pct = threshold * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{tool}@{}", pct.round() as i64)
    } else {
        format!("{tool}@{pct}")
    }
}

fn zero_text(truth: &GroundTruth) -> TextEvaluation {
    TextEvaluation {
        report: MatchReport::ZERO,
        tokens: TokenPrf {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
            matched_extracted: 0,
            matched_truth: 0,
            extracted_len: 0,
            truth_len: truth.tokens.len(),
        },
    }
}

fn describe(f: &ExtractionFailure) -> String {
    match f {
        ExtractionFailure::Missing => "missing".to_string(),
        ExtractionFailure::ToolError(e) => format!("tool error: {e}"),
        ExtractionFailure::Invalid(e) => e.to_string(),
    }
}

/// Scores one tool on one document. Returns one entry per report row the
/// mode produces (one per IoU threshold in box mode).
fn score_document(cfg: &RunConfig, tool: &str, truth: &GroundTruth) -> Vec<DocumentScore> {
    let extraction = read_extraction(&cfg.results_dir, tool, &truth.doc_id);
    if let Err(f) = &extraction {
        match f {
            ExtractionFailure::Missing => debug!("{tool}/{}: no extraction record", truth.doc_id),
            other => warn!("{tool}/{}: scored zero: {}", truth.doc_id, describe(other)),
        }
    }
    let row = |tool: String, failure: Option<String>, outcome| DocumentScore {
        doc_id: truth.doc_id.clone(),
        category: truth.category,
        tool,
        failure,
        outcome,
    };
    let missed_all = DetectionReport::from_counts(0, 0, truth.tables.len());

    match cfg.mode {
        Mode::Text => {
            let (failure, eval) = match &extraction {
                Ok(r) => (
                    None,
                    evaluate_text(r, truth, &cfg.text, &cfg.alignment, &cfg.tokenizer),
                ),
                Err(f) => (Some(describe(f)), zero_text(truth)),
            };
            vec![row(tool.to_string(), failure, Outcome::Text(eval))]
        }
        Mode::TableText => {
            let (failure, det) = match &extraction {
                Ok(r) => (
                    None,
                    match_tables_text_with(
                        &r.tables,
                        &truth.tables,
                        cfg.table.jaccard_threshold,
                        cfg.table.text_scoring,
                        &cfg.tokenizer,
                    ),
                ),
                Err(f) => (Some(describe(f)), missed_all),
            };
            vec![row(tool.to_string(), failure, Outcome::Table(det))]
        }
        Mode::TableBbox => cfg
            .table
            .iou_thresholds
            .iter()
            .map(|t| {
                let label = threshold_label(tool, *t);
                let scored = match &extraction {
                    Ok(r) => match_tables_bbox(&r.tables, &truth.tables, *t).map_err(|e| {
                        warn!("{tool}/{}: scored zero: {e}", truth.doc_id);
                        e.to_string()
                    }),
                    Err(f) => Err(describe(f)),
                };
                match scored {
                    Ok(det) => row(label, None, Outcome::Table(det)),
                    Err(msg) => row(label, Some(msg), Outcome::Table(missed_all)),
                }
            })
            .collect(),
    }
}

/// Scores every `(tool, document)` pair on a bounded worker pool. Output is
/// sorted by `(category, tool, doc_id)` whatever order the workers finish in.
pub fn score_documents(cfg: &RunConfig, truths: &[GroundTruth]) -> Result<Vec<DocumentScore>> {
    let work: Vec<(&str, &GroundTruth)> = cfg
        .tools
        .iter()
        .flat_map(|t| truths.iter().map(move |g| (t.as_str(), g)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EvalError::InvalidConfig(format!("worker pool: {e}")))?;
    let mut scores: Vec<DocumentScore> = pool.install(|| {
        work.par_iter()
            .flat_map_iter(|(tool, truth)| score_document(cfg, tool, truth))
            .collect()
    });
    scores.sort_by(|a, b| (a.category, &a.tool, &a.doc_id).cmp(&(b.category, &b.tool, &b.doc_id)));
    Ok(scores)
}

/// Mean with an order-independent summation: values are sorted first.
fn stable_mean(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}

/// Folds per-document scores into one report per `(category, tool)`.
pub fn aggregate(scores: &[DocumentScore], aggregation: Aggregation) -> Vec<CategoryReport> {
    let mut groups: BTreeMap<(DocCategory, &str), Vec<&DocumentScore>> = BTreeMap::new();
    for s in scores {
        groups
            .entry((s.category, s.tool.as_str()))
            .or_default()
            .push(s);
    }
    groups
        .into_iter()
        .map(|((category, tool), docs)| {
            let n_failed = docs.iter().filter(|d| d.failure.is_some()).count();
            let texts: Vec<&TextEvaluation> = docs
                .iter()
                .filter_map(|d| match &d.outcome {
                    Outcome::Text(t) => Some(t),
                    Outcome::Table(_) => None,
                })
                .collect();
            let tables: Vec<&DetectionReport> = docs
                .iter()
                .filter_map(|d| match &d.outcome {
                    Outcome::Table(t) => Some(t),
                    Outcome::Text(_) => None,
                })
                .collect();
            let mut rep = CategoryReport {
                category,
                tool: tool.to_string(),
                n_docs: docs.len(),
                n_failed,
                f1: 0.0,
                precision: 0.0,
                recall: 0.0,
                bleu4: None,
                local_alignment: None,
                true_positives: None,
                false_positives: None,
                false_negatives: None,
            };
            if !texts.is_empty() {
                let mean = |f: fn(&TextEvaluation) -> f64| {
                    stable_mean(texts.iter().map(|t| f(t)).collect())
                };
                rep.bleu4 = Some(mean(|t| t.report.bleu4));
                rep.local_alignment = Some(mean(|t| t.report.local_alignment));
                match aggregation {
                    Aggregation::Mean => {
                        rep.precision = mean(|t| t.report.precision);
                        rep.recall = mean(|t| t.report.recall);
                        rep.f1 = mean(|t| t.report.f1);
                    }
                    Aggregation::Micro => {
                        let sum = |f: fn(&TokenPrf) -> usize| {
                            texts.iter().map(|t| f(&t.tokens)).sum::<usize>()
                        };
                        rep.precision =
                            ratio(sum(|p| p.matched_extracted), sum(|p| p.extracted_len));
                        rep.recall = ratio(sum(|p| p.matched_truth), sum(|p| p.truth_len));
                        rep.f1 = f1_score(rep.precision, rep.recall);
                    }
                }
            } else {
                let tp = tables.iter().map(|t| t.true_positives).sum();
                let fp = tables.iter().map(|t| t.false_positives).sum();
                let fn_ = tables.iter().map(|t| t.false_negatives).sum();
                rep.true_positives = Some(tp);
                rep.false_positives = Some(fp);
                rep.false_negatives = Some(fn_);
                match aggregation {
                    Aggregation::Mean => {
                        let mean = |f: fn(&DetectionReport) -> f64| {
                            stable_mean(tables.iter().map(|t| f(t)).collect())
                        };
                        rep.precision = mean(|t| t.precision);
                        rep.recall = mean(|t| t.recall);
                        rep.f1 = mean(|t| t.f1);
                    }
                    Aggregation::Micro => {
                        let pooled = DetectionReport::from_counts(tp, fp, fn_);
                        rep.precision = pooled.precision;
                        rep.recall = pooled.recall;
                        rep.f1 = pooled.f1;
                    }
                }
            }
            rep
        })
        .collect()
}

/// Loads, samples and scores the corpus described by `cfg`.
pub fn run_evaluation(cfg: &RunConfig) -> Result<Vec<CategoryReport>> {
    cfg.validate()?;
    let corpus = load_corpus(&cfg.corpus_dir, &cfg.ingest)?;
    let sample = sample_balanced(&corpus, cfg.docs_per_category(), cfg.sample_seed)?;
    let truths: Vec<GroundTruth> = sample
        .iter()
        .map(|d| build_ground_truth(d, &cfg.tokenizer))
        .collect();
    let scores = score_documents(cfg, &truths)?;
    Ok(aggregate(&scores, cfg.aggregation()))
}
