//! Token-level and combined-string views of a text.

use serde::{Deserialize, Serialize};

use crate::types::{CombinedText, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Collapse whitespace runs when building the combined text for alignment.
    pub collapse_whitespace: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: false,
            collapse_whitespace: true,
        }
    }
}

impl TokenizerConfig {
    /// The combined-text view of `text` under this configuration.
    pub fn combined(&self, text: &str) -> CombinedText {
        let text = if self.lowercase {
            text.to_lowercase()
        } else {
            text.to_string()
        };
        if self.collapse_whitespace {
            combine(&text)
        } else {
            CombinedText(text)
        }
    }
}

/// Splits on Unicode whitespace runs.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> TokenSequence {
    if cfg.lowercase {
        TokenSequence::from_tokens(text.split_whitespace().map(str::to_lowercase))
    } else {
        TokenSequence::from_tokens(text.split_whitespace())
    }
}

/// Collapses every whitespace run (newlines included) to a single space and
/// trims both ends.
pub fn combine(text: &str) -> CombinedText {
    let mut out = String::with_capacity(text.len());
    for tok in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(tok);
    }
    CombinedText(out)
}
