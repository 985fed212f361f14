//! Domain vocabulary shared by ingestion, metrics and the corpus runner.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::geometry::{BoxCoco, BoxPascal};

/// The six DocLayNet document categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DocCategory {
    Financial,
    Law,
    Manual,
    Patent,
    Scientific,
    Tender,
}

impl DocCategory {
    pub const ALL: [DocCategory; 6] = [
        DocCategory::Financial,
        DocCategory::Law,
        DocCategory::Manual,
        DocCategory::Patent,
        DocCategory::Scientific,
        DocCategory::Tender,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DocCategory::Financial => "Financial",
            DocCategory::Law => "Law",
            DocCategory::Manual => "Manual",
            DocCategory::Patent => "Patent",
            DocCategory::Scientific => "Scientific",
            DocCategory::Tender => "Tender",
        }
    }
}

impl fmt::Display for DocCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lowercases and drops separators so `Page-footer`, `page_footer` and
/// `Page footer` compare equal.
fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, '-' | '_' | ' ' | '&'))
        .flat_map(char::to_lowercase)
        .collect()
}

impl FromStr for DocCategory {
    type Err = EvalError;

    /// Accepts the short names as well as the DocLayNet `doc_category` values
    /// (`financial_reports`, `laws_and_regulations`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cat = match squash(s).as_str() {
            "financial" | "financialreports" => DocCategory::Financial,
            "law" | "laws" | "lawsandregulations" | "lawandregulations" => DocCategory::Law,
            "manual" | "manuals" => DocCategory::Manual,
            "patent" | "patents" => DocCategory::Patent,
            "scientific" | "scientificarticles" => DocCategory::Scientific,
            "tender" | "tenders" | "governmenttenders" => DocCategory::Tender,
            _ => {
                return Err(EvalError::schema(
                    "doc_category",
                    format!("unknown document category `{s}`"),
                ))
            }
        };
        Ok(cat)
    }
}

impl TryFrom<String> for DocCategory {
    type Error = EvalError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<DocCategory> for String {
    fn from(c: DocCategory) -> String {
        c.as_str().to_string()
    }
}

/// The eleven layout element labels an annotation cell can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ElementLabel {
    Caption,
    Footnote,
    Formula,
    ListItem,
    PageFooter,
    PageHeader,
    Picture,
    SectionHeader,
    Table,
    Text,
    Title,
}

impl ElementLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementLabel::Caption => "Caption",
            ElementLabel::Footnote => "Footnote",
            ElementLabel::Formula => "Formula",
            ElementLabel::ListItem => "List-item",
            ElementLabel::PageFooter => "Page-footer",
            ElementLabel::PageHeader => "Page-header",
            ElementLabel::Picture => "Picture",
            ElementLabel::SectionHeader => "Section-header",
            ElementLabel::Table => "Table",
            ElementLabel::Text => "Text",
            ElementLabel::Title => "Title",
        }
    }
}

impl fmt::Display for ElementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementLabel {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let label = match squash(s).as_str() {
            "caption" => ElementLabel::Caption,
            "footnote" => ElementLabel::Footnote,
            "formula" => ElementLabel::Formula,
            "listitem" => ElementLabel::ListItem,
            "pagefooter" => ElementLabel::PageFooter,
            "pageheader" => ElementLabel::PageHeader,
            "picture" => ElementLabel::Picture,
            "sectionheader" => ElementLabel::SectionHeader,
            "table" => ElementLabel::Table,
            "text" => ElementLabel::Text,
            "title" => ElementLabel::Title,
            _ => {
                return Err(EvalError::schema(
                    "category",
                    format!("unknown element label `{s}`"),
                ))
            }
        };
        Ok(label)
    }
}

impl TryFrom<String> for ElementLabel {
    type Error = EvalError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ElementLabel> for String {
    fn from(l: ElementLabel) -> String {
        l.as_str().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationCell {
    /// The `id_box_line` reading-order key.
    pub reading_order_id: u64,
    pub category: ElementLabel,
    pub text: String,
    pub bbox: BoxCoco,
}

/// Ground truth for one page as read from its annotation file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub category: DocCategory,
    pub cells: Vec<AnnotationCell>,
}

/// Whitespace-free tokens in document order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    /// Wraps pre-split tokens, dropping empty ones.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TokenSequence(
            tokens
                .into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

impl std::ops::Index<usize> for TokenSequence {
    type Output = String;
    fn index(&self, i: usize) -> &String {
        &self.0[i]
    }
}

/// Text with every whitespace run collapsed to one space, fed to
/// character-level alignment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CombinedText(pub(crate) String);

impl CombinedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CombinedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One ground-truth table: the whitespace tokens of a `Table` annotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GtTable {
    pub cell_texts: Vec<String>,
    pub bbox: BoxPascal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub doc_id: String,
    pub category: DocCategory,
    pub combined_text: String,
    pub tokens: TokenSequence,
    pub tables: Vec<GtTable>,
}

/// A table as reported by an extraction tool, cells flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedTable {
    pub cell_texts: Vec<String>,
    pub bbox: Option<BoxPascal>,
}

/// One tool's output for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub doc_id: String,
    pub tool_name: String,
    pub text: String,
    pub tables: Vec<ExtractedTable>,
}

/// Harmonic mean with the `0/0 -> 0` convention.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall <= 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// `num / den`, or zero when the denominator is zero.
pub fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-document text-extraction scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub bleu4: f64,
    pub local_alignment: f64,
}

impl MatchReport {
    pub const ZERO: MatchReport = MatchReport {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        bleu4: 0.0,
        local_alignment: 0.0,
    };

    pub fn new(precision: f64, recall: f64, bleu4: f64, local_alignment: f64) -> Self {
        MatchReport {
            precision,
            recall,
            f1: f1_score(precision, recall),
            bleu4,
            local_alignment,
        }
    }
}

/// Per-document table-detection counts and the rates derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl DetectionReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        DetectionReport {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            precision,
            recall,
            f1: f1_score(precision, recall),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_parse_round_trips_case_insensitively() {
        for c in DocCategory::ALL {
            assert_eq!(c.as_str().parse::<DocCategory>().unwrap(), c);
            assert_eq!(c.as_str().to_uppercase().parse::<DocCategory>().unwrap(), c);
            assert_eq!(c.as_str().to_lowercase().parse::<DocCategory>().unwrap(), c);
        }
        assert_eq!(
            "laws_and_regulations".parse::<DocCategory>().unwrap(),
            DocCategory::Law
        );
        assert_eq!(
            "government_tenders".parse::<DocCategory>().unwrap(),
            DocCategory::Tender
        );
        assert!("poetry".parse::<DocCategory>().is_err());
    }

    #[test]
    fn element_labels_accept_spelling_variants() {
        assert_eq!(
            "Page footer".parse::<ElementLabel>().unwrap(),
            ElementLabel::PageFooter
        );
        assert_eq!(
            "page_header".parse::<ElementLabel>().unwrap(),
            ElementLabel::PageHeader
        );
        assert_eq!(
            "LIST-ITEM".parse::<ElementLabel>().unwrap(),
            ElementLabel::ListItem
        );
        assert!("Chart".parse::<ElementLabel>().is_err());
    }

    #[test]
    fn detection_rates_use_zero_for_empty_denominators() {
        let r = DetectionReport::from_counts(0, 0, 0);
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
        let r = DetectionReport::from_counts(1, 1, 1);
        assert_eq!((r.precision, r.recall, r.f1), (0.5, 0.5, 0.5));
        let r = DetectionReport::from_counts(0, 3, 0);
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn token_sequence_drops_empty_tokens() {
        let t = TokenSequence::from_tokens(["a", "", "b"]);
        assert_eq!(t.as_slice(), ["a", "b"]);
    }
}
