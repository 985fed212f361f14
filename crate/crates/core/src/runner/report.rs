//! CSV, JSON and markdown renderings of the category reports. All three are
//! byte-stable for a given report list.

use std::fs;
use std::path::Path;

use super::config::ReportFormat;
use super::CategoryReport;
use crate::error::{EvalError, Result};

pub const CSV_COLUMNS: [&str; 12] = [
    "category",
    "tool",
    "n_docs",
    "n_failed",
    "f1",
    "precision",
    "recall",
    "bleu4",
    "local_alignment",
    "true_positives",
    "false_positives",
    "false_negatives",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn render_csv(reports: &[CategoryReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.category.to_string(),
            r.tool.clone(),
            r.n_docs.to_string(),
            r.n_failed.to_string(),
            r.f1.to_string(),
            r.precision.to_string(),
            r.recall.to_string(),
            opt(r.bleu4),
            opt(r.local_alignment),
            opt(r.true_positives),
            opt(r.false_positives),
            opt(r.false_negatives),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn render_json(reports: &[CategoryReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports always serialize") + "\n"
}

type Metric = fn(&CategoryReport) -> f64;

/// Category-by-parser grid. The best value of each metric within a category
/// is bolded; ties are all bolded.
fn render_markdown(reports: &[CategoryReport]) -> String {
    let text_mode = reports.iter().any(|r| r.bleu4.is_some());
    let mut metrics: Vec<(&str, Metric)> = vec![
        ("F1", |r| r.f1),
        ("Precision", |r| r.precision),
        ("Recall", |r| r.recall),
    ];
    if text_mode {
        metrics.push(("BLEU", |r| r.bleu4.unwrap_or(0.0)));
        metrics.push(("Local Alignment", |r| r.local_alignment.unwrap_or(0.0)));
    }

    let mut out = String::from("| Category | Parser |");
    for (name, _) in &metrics {
        out.push_str(&format!(" {name} |"));
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---:|".repeat(metrics.len()));
    out.push('\n');

    let mut start = 0;
    while start < reports.len() {
        let cat = reports[start].category;
        let end = reports[start..]
            .iter()
            .position(|r| r.category != cat)
            .map_or(reports.len(), |p| start + p);
        let group = &reports[start..end];
        let best: Vec<f64> = metrics
            .iter()
            .map(|(_, f)| group.iter().map(f).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        for r in group {
            out.push_str(&format!("| {} | {} |", r.category, r.tool));
            for ((_, f), b) in metrics.iter().zip(&best) {
                let v = f(r);
                if v == *b {
                    out.push_str(&format!(" **{v:.4}** |"));
                } else {
                    out.push_str(&format!(" {v:.4} |"));
                }
            }
            out.push('\n');
        }
        start = end;
    }
    out
}

pub fn render_report(reports: &[CategoryReport], format: ReportFormat) -> Result<String> {
    if reports.is_empty() {
        return Err(EvalError::InvalidConfig("no reports to render".into()));
    }
    Ok(match format {
        ReportFormat::Csv => render_csv(reports),
        ReportFormat::Json => render_json(reports),
        ReportFormat::Markdown => render_markdown(reports),
    })
}

pub fn emit_report(reports: &[CategoryReport], path: &Path, format: ReportFormat) -> Result<()> {
    let body = render_report(reports, format)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| EvalError::io(dir, e))?;
    }
    fs::write(path, body).map_err(|e| EvalError::io(path, e))
}

/// Reads reports previously written in JSON form.
pub fn read_reports(path: &Path) -> Result<Vec<CategoryReport>> {
    let raw = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    serde_json::from_str(&raw)
        .map_err(|e| EvalError::schema(path.display().to_string(), e.to_string()))
}
