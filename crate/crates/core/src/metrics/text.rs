use serde::{Deserialize, Serialize};

use super::align::{normalized_local_alignment, AlignScoring};
use super::bleu::bleu;
use super::similarity::{token_prf, MatchStrategy, TokenPrf};
use crate::error::{EvalError, Result};
use crate::tokenize::{tokenize, TokenizerConfig};
use crate::types::{ExtractionResult, GroundTruth, MatchReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextMatchConfig {
    /// Minimum normalized similarity for two tokens to match.
    pub token_threshold: f64,
    pub bleu_max_n: usize,
    /// Per-order BLEU weights; empty means uniform `1 / bleu_max_n`.
    pub bleu_weights: Vec<f64>,
    /// Replace zero n-gram precisions by `1 / (2 * candidate_len)`.
    pub bleu_smoothing: bool,
    pub match_strategy: MatchStrategy,
}

impl Default for TextMatchConfig {
    fn default() -> Self {
        Self {
            token_threshold: 0.7,
            bleu_max_n: 4,
            bleu_weights: Vec::new(),
            bleu_smoothing: false,
            match_strategy: MatchStrategy::Prefiltered,
        }
    }
}

impl TextMatchConfig {
    pub fn bleu_weight_vector(&self) -> Vec<f64> {
        if self.bleu_weights.is_empty() {
            vec![1.0 / self.bleu_max_n as f64; self.bleu_max_n]
        } else {
            self.bleu_weights.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.token_threshold;
        if !(t > 0.0 && t <= 1.0) {
            return Err(EvalError::InvalidConfig(format!(
                "token_threshold must be in (0, 1], got {t}"
            )));
        }
        if self.bleu_max_n == 0 {
            return Err(EvalError::InvalidConfig("bleu_max_n must be >= 1".into()));
        }
        if !self.bleu_weights.is_empty() {
            let w = &self.bleu_weights;
            let sum: f64 = w.iter().sum();
            if w.len() != self.bleu_max_n
                || w.iter().any(|v| !(v.is_finite() && *v >= 0.0))
                || (sum - 1.0).abs() > 1e-9
            {
                return Err(EvalError::InvalidConfig(format!(
                    "bleu_weights must be {} non-negative values summing to 1, got {w:?}",
                    self.bleu_max_n
                )));
            }
        }
        Ok(())
    }
}

/// All text metrics for one document, plus the raw token match counts that
/// pooled aggregation needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextEvaluation {
    pub report: MatchReport,
    pub tokens: TokenPrf,
}

/// Token P/R/F1 and BLEU on the tokenized texts; local alignment on the
/// combined texts.
pub fn evaluate_text(
    extracted: &ExtractionResult,
    truth: &GroundTruth,
    cfg: &TextMatchConfig,
    scoring: &AlignScoring,
    tokenizer: &TokenizerConfig,
) -> TextEvaluation {
    let extracted_text = extracted.text.as_str();
    let ext_tokens = tokenize(extracted_text, tokenizer);
    let prf = token_prf(
        &ext_tokens,
        &truth.tokens,
        cfg.token_threshold,
        cfg.match_strategy,
    );
    let bleu4 = bleu(&ext_tokens, &truth.tokens, cfg);
    let ext_combined = tokenizer.combined(extracted_text);
    let gt_combined = tokenizer.combined(&truth.combined_text);
    let local = normalized_local_alignment(&ext_combined, &gt_combined, scoring);
    TextEvaluation {
        report: MatchReport {
            precision: prf.precision,
            recall: prf.recall,
            f1: prf.f1,
            bleu4,
            local_alignment: local,
        },
        tokens: prf,
    }
}
