//! Single-reference BLEU with brevity penalty.

use std::collections::HashMap;

use super::text::TextMatchConfig;
use crate::types::TokenSequence;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if n > 0 && tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram matches and the candidate's total n-gram count.
pub fn modified_precision_counts(
    candidate: &[String],
    reference: &[String],
    n: usize,
) -> (usize, usize) {
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let total = candidate.len().saturating_sub(n - 1);
    let clipped = cand
        .iter()
        .map(|(g, c)| (*c).min(refs.get(g).copied().unwrap_or(0)))
        .sum();
    (clipped, total)
}

/// `1` when the candidate is longer than the reference, else `exp(1 - r/c)`.
pub fn brevity_penalty(candidate_len: usize, reference_len: usize) -> f64 {
    if candidate_len > reference_len {
        1.0
    } else if candidate_len == 0 {
        0.0
    } else {
        (1.0 - reference_len as f64 / candidate_len as f64).exp()
    }
}

pub fn bleu(candidate: &TokenSequence, reference: &TokenSequence, cfg: &TextMatchConfig) -> f64 {
    let cand = candidate.as_slice();
    let refs = reference.as_slice();
    if cand.is_empty() {
        return 0.0;
    }
    let weights = cfg.bleu_weight_vector();
    let mut log_sum = 0.0;
    for (k, w) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let (clipped, total) = modified_precision_counts(cand, refs, k + 1);
        let p = if clipped > 0 {
            clipped as f64 / total as f64
        } else if cfg.bleu_smoothing {
            1.0 / (2.0 * cand.len() as f64)
        } else {
            return 0.0;
        };
        log_sum += w * p.ln();
    }
    brevity_penalty(cand.len(), refs.len()) * log_sum.exp()
}
