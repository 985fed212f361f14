//! Text-extraction metrics.

pub mod align;
pub mod bleu;
pub mod levenshtein;
pub mod similarity;
pub mod text;

pub use align::{
    local_alignment_score, normalized_local_alignment, normalized_local_alignment_str, AlignScoring,
};
pub use bleu::{bleu, brevity_penalty};
pub use levenshtein::{levenshtein_distance, normalized_levenshtein_similarity};
pub use similarity::{
    matrix_prf, similarity_matrix, token_prf, MatchStrategy, SimilarityMatrix, TokenPrf,
};
pub use text::{evaluate_text, TextEvaluation, TextMatchConfig};
