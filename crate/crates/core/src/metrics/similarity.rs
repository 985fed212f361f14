//! Token similarity matrix and the thresholded precision/recall built on it.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::levenshtein::{levenshtein_bounded, normalized_similarity_chars};
use crate::types::{f1_score, ratio, TokenSequence};

/// Dense `extracted x truth` matrix of normalized Levenshtein similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Number of extracted tokens.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of ground-truth tokens.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn count_at_least(&self, threshold: f64) -> usize {
        self.values.iter().filter(|v| **v >= threshold).count()
    }
}

pub fn similarity_matrix(extracted: &TokenSequence, truth: &TokenSequence) -> SimilarityMatrix {
    let rows = extracted.len();
    let cols = truth.len();
    let truth_chars: Vec<Vec<char>> = truth.iter().map(|t| t.chars().collect()).collect();
    let mut values = vec![0.0; rows * cols];
    if cols > 0 {
        values
            .par_chunks_mut(cols)
            .zip(extracted.as_slice().par_iter())
            .for_each(|(row, tok)| {
                let a: Vec<char> = tok.chars().collect();
                for (cell, b) in row.iter_mut().zip(&truth_chars) {
                    *cell = normalized_similarity_chars(&a, b);
                }
            });
    }
    SimilarityMatrix { rows, cols, values }
}

/// Thresholded token matching outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Extracted tokens with at least one match.
    pub matched_extracted: usize,
    /// Ground-truth tokens with at least one match.
    pub matched_truth: usize,
    pub extracted_len: usize,
    pub truth_len: usize,
}

impl TokenPrf {
    fn from_counts(matched_e: usize, matched_t: usize, len_e: usize, len_t: usize) -> Self {
        let precision = ratio(matched_e, len_e);
        let recall = ratio(matched_t, len_t);
        TokenPrf {
            precision,
            recall,
            f1: f1_score(precision, recall),
            matched_extracted: matched_e,
            matched_truth: matched_t,
            extracted_len: len_e,
            truth_len: len_t,
        }
    }
}

/// Precision, recall and F1 over a similarity matrix.
///
/// Each extracted token counts at most once toward precision and each
/// ground-truth token at most once toward recall, so repeated tokens cannot
/// push either rate above 1.
pub fn matrix_prf(s: &SimilarityMatrix, threshold: f64) -> TokenPrf {
    let mut col_hit = vec![false; s.cols];
    let mut matched_rows = 0;
    for i in 0..s.rows {
        let mut hit = false;
        for (j, v) in s.row(i).iter().enumerate() {
            if *v >= threshold {
                hit = true;
                col_hit[j] = true;
            }
        }
        matched_rows += usize::from(hit);
    }
    let matched_cols = col_hit.iter().filter(|h| **h).count();
    TokenPrf::from_counts(matched_rows, matched_cols, s.rows, s.cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStrategy {
    /// Materialize the full matrix, then threshold it.
    Exhaustive,
    /// Work on distinct tokens, skip pairs whose length gap already rules out
    /// the threshold and cut each edit distance off at the largest distance
    /// that can still pass.
    #[default]
    Prefiltered,
}

pub fn token_prf(
    extracted: &TokenSequence,
    truth: &TokenSequence,
    threshold: f64,
    strategy: MatchStrategy,
) -> TokenPrf {
    match strategy {
        MatchStrategy::Exhaustive => matrix_prf(&similarity_matrix(extracted, truth), threshold),
        MatchStrategy::Prefiltered => prefiltered_prf(extracted, truth, threshold),
    }
}

/// Whether `a` and `b` reach `threshold`, decided without computing distances
/// that cannot matter. Agrees bit-for-bit with thresholding
/// [`normalized_similarity_chars`].
fn reaches_threshold(a: &[char], b: &[char], threshold: f64) -> bool {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0 >= threshold;
    }
    // One unit of slack keeps float rounding in the bound from ever cutting
    // off a distance that would pass the exact comparison below.
    let max_dist = ((1.0 - threshold).max(0.0) * longest as f64).floor() as usize + 1;
    match levenshtein_bounded(a, b, max_dist) {
        Some(d) => 1.0 - d as f64 / longest as f64 >= threshold,
        None => false,
    }
}

fn distinct(tokens: &TokenSequence) -> (Vec<Vec<char>>, Vec<usize>) {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut uniq = Vec::new();
    let mut counts = Vec::new();
    for t in tokens.iter() {
        let k = *index.entry(t.as_str()).or_insert_with(|| {
            uniq.push(t.chars().collect());
            counts.push(0);
            uniq.len() - 1
        });
        counts[k] += 1;
    }
    (uniq, counts)
}

fn prefiltered_prf(extracted: &TokenSequence, truth: &TokenSequence, threshold: f64) -> TokenPrf {
    let (ue, ce) = distinct(extracted);
    let (ut, ct) = distinct(truth);

    let exact: HashMap<&[char], usize> = ut
        .iter()
        .enumerate()
        .map(|(j, t)| (t.as_slice(), j))
        .collect();
    let mut hit_e = vec![false; ue.len()];
    let mut hit_t = vec![false; ut.len()];
    if threshold <= 1.0 {
        for (i, e) in ue.iter().enumerate() {
            if let Some(&j) = exact.get(e.as_slice()) {
                hit_e[i] = true;
                hit_t[j] = true;
            }
        }
    }

    // Pairs are only worth testing while one side is still unmatched.
    for (i, e) in ue.iter().enumerate() {
        for (j, t) in ut.iter().enumerate() {
            if hit_e[i] && hit_t[j] {
                continue;
            }
            if reaches_threshold(e, t, threshold) {
                hit_e[i] = true;
                hit_t[j] = true;
            }
        }
    }

    let matched_e = hit_e
        .iter()
        .zip(&ce)
        .filter(|(h, _)| **h)
        .map(|(_, c)| c)
        .sum();
    let matched_t = hit_t
        .iter()
        .zip(&ct)
        .filter(|(h, _)| **h)
        .map(|(_, c)| c)
        .sum();
    TokenPrf::from_counts(matched_e, matched_t, extracted.len(), truth.len())
}
