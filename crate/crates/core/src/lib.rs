//! Evaluation harness for PDF text and table extraction.
//!
//! Ground truth is rebuilt from per-page layout annotations; extractor output
//! arrives as one interchange record per tool and page. Text is scored with
//! thresholded token-similarity F1, BLEU-4 and normalized local alignment;
//! tables with one-to-one detection matching by token-set Jaccard or box IoU.

pub mod error;
pub mod geometry;
pub mod ingest;
pub mod metrics;
pub mod runner;
pub mod table;
pub mod tokenize;
pub mod types;

pub use error::{EvalError, Result};
pub use geometry::{coco_to_pascal, BoxCoco, BoxPascal};
pub use ingest::{
    build_ground_truth, build_ground_truth_tables, build_ground_truth_text, load_annotations,
    parse_annotations, BboxOrigin, IngestConfig,
};
pub use metrics::{
    bleu, evaluate_text, levenshtein_distance, local_alignment_score, matrix_prf,
    normalized_levenshtein_similarity, normalized_local_alignment, similarity_matrix, token_prf,
    AlignScoring, MatchStrategy, SimilarityMatrix, TextEvaluation, TextMatchConfig, TokenPrf,
};
pub use runner::{
    aggregate, emit_report, load_corpus, run_evaluation, sample_balanced, score_documents,
    CategoryReport, DocumentScore, Mode, ReportFormat, RunConfig,
};
pub use table::{iou, jaccard_similarity, match_tables_bbox, match_tables_text, TableMatchConfig};
pub use tokenize::{combine, tokenize, TokenizerConfig};
pub use types::{
    AnnotatedDocument, AnnotationCell, CombinedText, DetectionReport, DocCategory, ElementLabel,
    ExtractedTable, ExtractionResult, GroundTruth, GtTable, MatchReport, TokenSequence,
};
