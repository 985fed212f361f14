use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::ingest::IngestConfig;
use crate::metrics::{AlignScoring, TextMatchConfig};
use crate::table::TableMatchConfig;
use crate::tokenize::TokenizerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Token F1, BLEU and local alignment on the page text.
    Text,
    /// Table detection judged by token-set similarity.
    TableText,
    /// Table detection judged by box IoU, one report per IoU threshold.
    TableBbox,
}

impl Mode {
    pub fn default_docs_per_category(self) -> usize {
        match self {
            Mode::Text => 800,
            Mode::TableText | Mode::TableBbox => 400,
        }
    }

    pub fn default_aggregation(self) -> Aggregation {
        match self {
            Mode::Text => Aggregation::Mean,
            Mode::TableText | Mode::TableBbox => Aggregation::Micro,
        }
    }
}

impl FromStr for Mode {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "text" => Ok(Mode::Text),
            "table_text" => Ok(Mode::TableText),
            "table_bbox" => Ok(Mode::TableBbox),
            _ => Err(EvalError::InvalidConfig(format!("unknown mode `{s}`"))),
        }
    }
}

/// How per-document results are folded into one row per category and tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Unweighted mean of per-document values.
    Mean,
    /// Pool the underlying counts (matched tokens, or TP/FP/FN) across
    /// documents before taking ratios. BLEU and local alignment stay means.
    Micro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(ReportFormat::Csv),
            "json" => Some(ReportFormat::Json),
            "md" | "markdown" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }
}

impl FromStr for ReportFormat {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(EvalError::InvalidConfig(format!(
                "unknown report format `{s}`"
            ))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "markdown",
        })
    }
}

/// A full evaluation run, usually read from a TOML file.
///
/// ```toml
/// corpus_dir = "doclaynet/test/annotations"
/// results_dir = "results"
/// tools = ["pymupdf", "pypdf"]
/// mode = "text"
/// sample_seed = 7
/// output = "reports/text.csv"
///
/// [text]
/// token_threshold = 0.7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus_dir: PathBuf,
    pub results_dir: PathBuf,
    pub tools: Vec<String>,
    pub mode: Mode,
    /// Defaults to 800 in text mode and 400 in the table modes.
    #[serde(default)]
    pub docs_per_category: Option<usize>,
    #[serde(default)]
    pub sample_seed: u64,
    pub output: PathBuf,
    /// Inferred from the output extension when absent.
    #[serde(default)]
    pub format: Option<ReportFormat>,
    /// Defaults to `mean` for text and `micro` for tables.
    #[serde(default)]
    pub aggregation: Option<Aggregation>,
    /// Worker threads; 0 lets the pool pick.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub text: TextMatchConfig,
    #[serde(default)]
    pub table: TableMatchConfig,
    #[serde(default)]
    pub alignment: AlignScoring,
    #[serde(default)]
    pub tokenizer: TokenizerConfig,
    #[serde(default)]
    pub ingest: IngestConfig,
}

impl RunConfig {
    pub fn new(
        corpus_dir: PathBuf,
        results_dir: PathBuf,
        tools: Vec<String>,
        mode: Mode,
        output: PathBuf,
    ) -> Self {
        RunConfig {
            corpus_dir,
            results_dir,
            tools,
            mode,
            docs_per_category: None,
            sample_seed: 0,
            output,
            format: None,
            aggregation: None,
            workers: 0,
            text: TextMatchConfig::default(),
            table: TableMatchConfig::default(),
            alignment: AlignScoring::default(),
            tokenizer: TokenizerConfig::default(),
            ingest: IngestConfig::default(),
        }
    }

    /// Reads a TOML config. Relative paths inside it are taken relative to
    /// the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        let mut cfg: RunConfig = toml::from_str(&raw)
            .map_err(|e| EvalError::schema(path.display().to_string(), e.to_string()))?;
        if let Some(base) = path.parent() {
            for p in [&mut cfg.corpus_dir, &mut cfg.results_dir, &mut cfg.output] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn docs_per_category(&self) -> usize {
        self.docs_per_category
            .unwrap_or_else(|| self.mode.default_docs_per_category())
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
            .unwrap_or_else(|| self.mode.default_aggregation())
    }

    pub fn format(&self) -> ReportFormat {
        self.format
            .or_else(|| ReportFormat::from_path(&self.output))
            .unwrap_or(ReportFormat::Json)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tools.is_empty() {
            return Err(EvalError::InvalidConfig("no tools listed".into()));
        }
        if let Some(bad) = self
            .tools
            .iter()
            .find(|t| t.is_empty() || t.contains(['/', '\\']) || t.as_str() == "..")
        {
            return Err(EvalError::InvalidConfig(format!("bad tool name `{bad}`")));
        }
        if self.docs_per_category() == 0 {
            return Err(EvalError::InvalidConfig(
                "docs_per_category must be at least 1".into(),
            ));
        }
        self.text.validate()?;
        self.table.validate()?;
        self.alignment.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml_gets_defaults() {
        let cfg: RunConfig = toml::from_str(
            r#"
            corpus_dir = "c"
            results_dir = "r"
            tools = ["pypdf"]
            mode = "table_bbox"
            output = "out.md"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.docs_per_category(), 400);
        assert_eq!(cfg.aggregation(), Aggregation::Micro);
        assert_eq!(cfg.format(), ReportFormat::Markdown);
        assert_eq!(cfg.table.iou_thresholds, [0.6, 0.7]);
        assert_eq!(cfg.text.token_threshold, 0.7);
        assert_eq!(cfg.table.jaccard_threshold, 0.75);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn nested_overrides_and_unknown_keys() {
        let cfg: RunConfig = toml::from_str(
            r#"
            corpus_dir = "c"
            results_dir = "r"
            tools = ["a"]
            mode = "text"
            output = "o.csv"
            docs_per_category = 3
            [text]
            token_threshold = 0.8
            [alignment]
            match = 2.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.docs_per_category(), 3);
        assert_eq!(cfg.text.token_threshold, 0.8);
        assert_eq!(cfg.alignment.match_score, 2.0);
        assert_eq!(cfg.alignment.extend_gap, -0.5);

        let bad = toml::from_str::<RunConfig>(
            r#"
            corpus_dir = "c"
            results_dir = "r"
            tools = ["a"]
            mode = "text"
            output = "o.csv"
            typo = 1
            "#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn rejects_path_like_tool_names() {
        let mut cfg = RunConfig::new(
            "c".into(),
            "r".into(),
            vec!["../x".into()],
            Mode::Text,
            "o".into(),
        );
        assert!(cfg.validate().is_err());
        cfg.tools = vec!["pymupdf".into()];
        assert!(cfg.validate().is_ok());
    }
}
