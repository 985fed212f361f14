//! Table-detection scoring.
//!
//! Rule-based extractors report table content without geometry, so their
//! tables are paired with ground truth by the Jaccard similarity of their
//! token sets. Detectors that report boxes are paired by IoU. Either way the
//! pairing is greedy and one-to-one, best score first.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::geometry::BoxPascal;
use crate::metrics::levenshtein::normalized_levenshtein_similarity;
use crate::tokenize::{tokenize, TokenizerConfig};
use crate::types::{DetectionReport, ExtractedTable, GtTable};

/// How a text-only table pair is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableTextScoring {
    /// Jaccard similarity of the flattened token sets.
    #[default]
    Jaccard,
    /// Normalized Levenshtein similarity of the flattened tokens joined by
    /// single spaces. Kept for sensitivity runs only.
    Levenshtein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableMatchConfig {
    pub jaccard_threshold: f64,
    pub iou_thresholds: Vec<f64>,
    pub text_scoring: TableTextScoring,
}

impl Default for TableMatchConfig {
    fn default() -> Self {
        Self {
            jaccard_threshold: 0.75,
            iou_thresholds: vec![0.6, 0.7],
            text_scoring: TableTextScoring::Jaccard,
        }
    }
}

impl TableMatchConfig {
    pub fn validate(&self) -> Result<()> {
        let in_range = |t: f64| t > 0.0 && t <= 1.0;
        if !in_range(self.jaccard_threshold) {
            return Err(EvalError::InvalidConfig(format!(
                "jaccard_threshold must be in (0, 1], got {}",
                self.jaccard_threshold
            )));
        }
        if self.iou_thresholds.is_empty() || !self.iou_thresholds.iter().all(|t| in_range(*t)) {
            return Err(EvalError::InvalidConfig(format!(
                "iou_thresholds must be a non-empty list in (0, 1], got {:?}",
                self.iou_thresholds
            )));
        }
        Ok(())
    }
}

/// `|a ∩ b| / |a ∪ b|`, 1 for two empty sets.
pub fn jaccard_similarity<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Intersection over union of two boxes. Zero-area boxes score 1 against an
/// identical box and 0 against anything else.
pub fn iou(a: &BoxPascal, b: &BoxPascal) -> f64 {
    let inter = a.intersection_area(b);
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        if a == b {
            1.0
        } else {
            0.0
        }
    } else {
        inter / union
    }
}

fn token_set(cells: &[String], tokenizer: &TokenizerConfig) -> BTreeSet<String> {
    cells
        .iter()
        .flat_map(|c| tokenize(c, tokenizer).into_vec())
        .collect()
}

/// Rank of each item under `cmp`; equal items share a rank.
fn content_ranks<T>(items: &[T], cmp: impl Fn(&T, &T) -> Ordering) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|a, b| cmp(&items[*a], &items[*b]));
    let mut ranks = vec![0; items.len()];
    let mut rank = 0;
    for w in 0..order.len() {
        if w > 0 && cmp(&items[order[w - 1]], &items[order[w]]) != Ordering::Equal {
            rank = w;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

/// Greedy one-to-one matching over a `truth x extracted` score matrix.
///
/// Pairs are visited in descending score. Ties go to the pair whose truth,
/// then extracted, table sorts first by content, so the number of matches
/// does not depend on how either list happens to be ordered.
fn greedy_matches(
    scores: &[Vec<f64>],
    truth_rank: &[usize],
    ext_rank: &[usize],
    threshold: f64,
) -> usize {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (t, row) in scores.iter().enumerate() {
        for (e, s) in row.iter().enumerate() {
            if *s >= threshold {
                pairs.push((*s, t, e));
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| truth_rank[a.1].cmp(&truth_rank[b.1]))
            .then_with(|| ext_rank[a.2].cmp(&ext_rank[b.2]))
            .then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
    });
    let mut truth_used = vec![false; truth_rank.len()];
    let mut ext_used = vec![false; ext_rank.len()];
    let mut tp = 0;
    for (_, t, e) in pairs {
        if !truth_used[t] && !ext_used[e] {
            truth_used[t] = true;
            ext_used[e] = true;
            tp += 1;
        }
    }
    tp
}

fn report(tp: usize, n_extracted: usize, n_truth: usize) -> DetectionReport {
    DetectionReport::from_counts(tp, n_extracted - tp, n_truth - tp)
}

/// Text-based matching with Jaccard scoring and the default tokenizer.
pub fn match_tables_text(
    extracted: &[ExtractedTable],
    truth: &[GtTable],
    threshold: f64,
) -> DetectionReport {
    match_tables_text_with(
        extracted,
        truth,
        threshold,
        TableTextScoring::Jaccard,
        &TokenizerConfig::default(),
    )
}

pub fn match_tables_text_with(
    extracted: &[ExtractedTable],
    truth: &[GtTable],
    threshold: f64,
    scoring: TableTextScoring,
    tokenizer: &TokenizerConfig,
) -> DetectionReport {
    let ext_sets: Vec<BTreeSet<String>> = extracted
        .iter()
        .map(|t| token_set(&t.cell_texts, tokenizer))
        .collect();
    let gt_sets: Vec<BTreeSet<String>> = truth
        .iter()
        .map(|t| token_set(&t.cell_texts, tokenizer))
        .collect();

    let scores: Vec<Vec<f64>> = match scoring {
        TableTextScoring::Jaccard => gt_sets
            .iter()
            .map(|g| ext_sets.iter().map(|e| jaccard_similarity(g, e)).collect())
            .collect(),
        TableTextScoring::Levenshtein => {
            let join = |cells: &[String]| {
                cells
                    .iter()
                    .flat_map(|c| tokenize(c, tokenizer).into_vec())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let ext_text: Vec<String> = extracted.iter().map(|t| join(&t.cell_texts)).collect();
            truth
                .iter()
                .map(|g| {
                    let g = join(&g.cell_texts);
                    ext_text
                        .iter()
                        .map(|e| normalized_levenshtein_similarity(&g, e))
                        .collect()
                })
                .collect()
        }
    };

    let truth_rank = content_ranks(&gt_sets, |a, b| a.cmp(b));
    let ext_rank = content_ranks(&ext_sets, |a, b| a.cmp(b));
    let tp = greedy_matches(&scores, &truth_rank, &ext_rank, threshold);
    report(tp, extracted.len(), truth.len())
}

fn box_cmp(a: &BoxPascal, b: &BoxPascal) -> Ordering {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Box-based matching. Every extracted table must carry a box.
pub fn match_tables_bbox(
    extracted: &[ExtractedTable],
    truth: &[GtTable],
    iou_threshold: f64,
) -> Result<DetectionReport> {
    let ext_boxes: Vec<BoxPascal> = extracted
        .iter()
        .enumerate()
        .map(|(index, t)| t.bbox.ok_or(EvalError::MissingBox { index }))
        .collect::<Result<_>>()?;
    let gt_boxes: Vec<BoxPascal> = truth.iter().map(|t| t.bbox).collect();
    let scores: Vec<Vec<f64>> = gt_boxes
        .iter()
        .map(|g| ext_boxes.iter().map(|e| iou(g, e)).collect())
        .collect();
    let truth_rank = content_ranks(&gt_boxes, box_cmp);
    let ext_rank = content_ranks(&ext_boxes, box_cmp);
    let tp = greedy_matches(&scores, &truth_rank, &ext_rank, iou_threshold);
    Ok(report(tp, extracted.len(), truth.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn bx(v: [f64; 4]) -> BoxPascal {
        BoxPascal::from_array(v).unwrap()
    }

    fn gt(cells: &str, b: [f64; 4]) -> GtTable {
        GtTable {
            cell_texts: cells.split_whitespace().map(str::to_string).collect(),
            bbox: bx(b),
        }
    }

    fn ext(cells: &[&str], b: Option<[f64; 4]>) -> ExtractedTable {
        ExtractedTable {
            cell_texts: cells.iter().map(|s| s.to_string()).collect(),
            bbox: b.map(bx),
        }
    }

    #[test]
    fn jaccard_cases() {
        assert_eq!(
            jaccard_similarity(&set(&["x", "y"]), &set(&["x", "y"])),
            1.0
        );
        assert_eq!(jaccard_similarity(&set(&["x"]), &set(&["y"])), 0.0);
        assert_eq!(
            jaccard_similarity(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])),
            0.5
        );
        assert_eq!(jaccard_similarity::<String>(&set(&[]), &set(&[])), 1.0);
    }

    #[test]
    fn iou_cases() {
        let a = bx([0.0, 0.0, 2.0, 2.0]);
        assert_eq!(iou(&a, &a), 1.0);
        assert_eq!(iou(&a, &bx([5.0, 5.0, 6.0, 6.0])), 0.0);
        assert!((iou(&a, &bx([1.0, 0.0, 3.0, 2.0])) - 1.0 / 3.0).abs() < 1e-12);
        let p = bx([1.0, 1.0, 1.0, 1.0]);
        assert_eq!(iou(&p, &p), 1.0);
        assert_eq!(iou(&p, &bx([2.0, 2.0, 2.0, 2.0])), 0.0);
    }

    #[test]
    fn identical_tables_match_perfectly() {
        let truth = vec![gt("a b c", [0.0; 4]), gt("d e", [0.0; 4])];
        let extracted = vec![ext(&["d", "e"], None), ext(&["a b", "c"], None)];
        let r = match_tables_text(&extracted, &truth, 0.75);
        assert_eq!(
            (r.true_positives, r.false_positives, r.false_negatives),
            (2, 0, 0)
        );
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn nothing_detected() {
        let truth = vec![gt("a", [0.0; 4]), gt("b", [0.0; 4])];
        let r = match_tables_text(&[], &truth, 0.75);
        assert_eq!((r.true_positives, r.false_negatives, r.recall), (0, 2, 0.0));
    }

    #[test]
    fn one_of_two_pairs_clears_threshold() {
        // scores: t0/e0 = 1.0, t1/e1 = 2/4 (below 0.75), cross pairs 0
        let truth = vec![gt("a b c d", [0.0; 4]), gt("w x y", [0.0; 4])];
        let extracted = vec![
            ext(&["a", "b", "c", "d"], None),
            ext(&["x", "y", "z"], None),
        ];
        let r = match_tables_text(&extracted, &truth, 0.75);
        assert_eq!(
            (r.true_positives, r.false_positives, r.false_negatives),
            (1, 1, 1)
        );
        assert_eq!((r.precision, r.recall, r.f1), (0.5, 0.5, 0.5));
    }

    #[test]
    fn tied_scores_do_not_depend_on_list_order() {
        // t0 overlaps both detections equally; t1 only the first.
        let truth = vec![gt("a b", [0.0; 4]), gt("a c", [0.0; 4])];
        let e = [
            ext(&["a", "b", "c"], None),
            ext(&["a", "b", "c", "z"], None),
        ];
        let fwd = match_tables_text(&e, &truth, 0.5);
        let rev_truth: Vec<_> = truth.iter().rev().cloned().collect();
        let rev_ext: Vec<_> = e.iter().rev().cloned().collect();
        let bwd = match_tables_text(&rev_ext, &rev_truth, 0.5);
        assert_eq!(fwd, bwd);
    }

    #[test]
    fn iou_threshold_split() {
        // IoU = 0.65 * ... : [0,0,10,10] vs [0,0,10,6.5] -> 65/100
        let truth = vec![gt("t", [0.0, 0.0, 10.0, 10.0])];
        let det = vec![ext(&[], Some([0.0, 0.0, 10.0, 6.5]))];
        assert!((iou(&truth[0].bbox, &det[0].bbox.unwrap()) - 0.65).abs() < 1e-12);
        let at60 = match_tables_bbox(&det, &truth, 0.6).unwrap();
        let at70 = match_tables_bbox(&det, &truth, 0.7).unwrap();
        assert_eq!(
            (
                at60.true_positives,
                at60.false_positives,
                at60.false_negatives
            ),
            (1, 0, 0)
        );
        assert_eq!(
            (
                at70.true_positives,
                at70.false_positives,
                at70.false_negatives
            ),
            (0, 1, 1)
        );
    }

    #[test]
    fn double_detection_is_one_tp_one_fp() {
        let truth = vec![gt("t", [0.0, 0.0, 10.0, 10.0])];
        let det = vec![
            ext(&[], Some([0.0, 0.0, 10.0, 10.0])),
            ext(&[], Some([0.0, 0.0, 10.0, 9.0])),
        ];
        let r = match_tables_bbox(&det, &truth, 0.6).unwrap();
        assert_eq!(
            (r.true_positives, r.false_positives, r.false_negatives),
            (1, 1, 0)
        );
    }

    #[test]
    fn missing_box_is_reported() {
        let truth = vec![gt("t", [0.0, 0.0, 1.0, 1.0])];
        let det = vec![ext(&[], Some([0.0, 0.0, 1.0, 1.0])), ext(&["x"], None)];
        match match_tables_bbox(&det, &truth, 0.6) {
            Err(EvalError::MissingBox { index }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn levenshtein_scoring_switch() {
        let truth = vec![gt("Revenue 2023 1,000", [0.0; 4])];
        let extracted = vec![ext(&["Revenue", "2023", "1.000"], None)];
        let jac = match_tables_text(&extracted, &truth, 0.75);
        assert_eq!(jac.true_positives, 0);
        let lev = match_tables_text_with(
            &extracted,
            &truth,
            0.75,
            TableTextScoring::Levenshtein,
            &TokenizerConfig::default(),
        );
        assert_eq!(lev.true_positives, 1);
    }
}
