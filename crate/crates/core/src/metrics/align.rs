//! Smith-Waterman local alignment with affine gaps.
//!
//! A run of `n` consecutive gaps in the same string scores
//! `open_gap + (n - 1) * extend_gap`. Three score lanes are kept per cell:
//! alignments ending in a match/mismatch column, ending in a gap in `b`
//! (a char of `a` left unpaired), and ending in a gap in `a`. A gap lane is
//! only extended from itself; entering it from any other lane pays the open
//! score, so adjacent runs in opposite strings are two separate clusters.

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::types::CombinedText;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignScoring {
    #[serde(rename = "match")]
    pub match_score: f64,
    pub mismatch: f64,
    pub open_gap: f64,
    pub extend_gap: f64,
}

impl Default for AlignScoring {
    fn default() -> Self {
        Self {
            match_score: 1.0,
            mismatch: -1.0,
            open_gap: -1.0,
            extend_gap: -0.5,
        }
    }
}

impl AlignScoring {
    pub fn validate(&self) -> Result<()> {
        let ok = self.match_score > 0.0
            && self.mismatch <= 0.0
            && self.open_gap <= 0.0
            && self.extend_gap <= 0.0
            && [
                self.match_score,
                self.mismatch,
                self.open_gap,
                self.extend_gap,
            ]
            .iter()
            .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(EvalError::InvalidConfig(format!(
                "alignment scoring needs match > 0 and mismatch, open_gap, extend_gap <= 0; got {self:?}"
            )))
        }
    }

    /// Score of a gap cluster of length `n` (`n >= 1`).
    pub fn gap_score(&self, n: usize) -> f64 {
        self.open_gap + (n.saturating_sub(1)) as f64 * self.extend_gap
    }
}

pub fn local_alignment_score(a: &str, b: &str, scoring: &AlignScoring) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    local_alignment_chars(&a, &b, scoring)
}

pub fn local_alignment_chars(a: &[char], b: &[char], sc: &AlignScoring) -> f64 {
    // Iterate over the longer string so the rows stay short.
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let m = b.len();
    if m == 0 {
        return 0.0;
    }
    let neg = f64::NEG_INFINITY;
    // Lanes for the previous row: diagonal-ending, gap-in-b-ending, gap-in-a-ending.
    let mut diag_prev = vec![neg; m + 1];
    let mut gap_b_prev = vec![neg; m + 1];
    let mut gap_a_prev = vec![neg; m + 1];
    let mut diag_cur = vec![neg; m + 1];
    let mut gap_b_cur = vec![neg; m + 1];
    let mut gap_a_cur = vec![neg; m + 1];
    let mut best = 0.0f64;

    for &ca in a {
        diag_cur[0] = neg;
        gap_a_cur[0] = neg;
        gap_b_cur[0] = sc.open_gap.max(gap_b_prev[0] + sc.extend_gap);
        for j in 1..=m {
            let s = if ca == b[j - 1] {
                sc.match_score
            } else {
                sc.mismatch
            };
            let before = 0.0f64
                .max(diag_prev[j - 1])
                .max(gap_b_prev[j - 1])
                .max(gap_a_prev[j - 1]);
            let d = before + s;

            let open_b = 0.0f64.max(diag_prev[j]).max(gap_a_prev[j]) + sc.open_gap;
            let gb = open_b.max(gap_b_prev[j] + sc.extend_gap);

            let open_a = 0.0f64.max(diag_cur[j - 1]).max(gap_b_cur[j - 1]) + sc.open_gap;
            let ga = open_a.max(gap_a_cur[j - 1] + sc.extend_gap);

            diag_cur[j] = d;
            gap_b_cur[j] = gb;
            gap_a_cur[j] = ga;
            best = best.max(d).max(gb).max(ga);
        }
        std::mem::swap(&mut diag_prev, &mut diag_cur);
        std::mem::swap(&mut gap_b_prev, &mut gap_b_cur);
        std::mem::swap(&mut gap_a_prev, &mut gap_a_cur);
    }
    best
}

/// Local alignment score divided by the best achievable score for the longer
/// string, `match * max(len_a, len_b)` in chars. Two empty strings score 1.
pub fn normalized_local_alignment(
    a: &CombinedText,
    b: &CombinedText,
    scoring: &AlignScoring,
) -> f64 {
    normalized_local_alignment_str(a.as_str(), b.as_str(), scoring)
}

pub fn normalized_local_alignment_str(a: &str, b: &str, scoring: &AlignScoring) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    local_alignment_chars(&a, &b, scoring) / (scoring.match_score * longest as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Clone, Copy, PartialEq)]
    enum Col {
        Pair,
        GapB,
        GapA,
    }

    /// Enumerates every alignment column sequence of `a` against `b`
    /// (both fully consumed) and returns the best total score.
    fn best_global(a: &[char], b: &[char], last: Option<Col>, sc: &AlignScoring) -> f64 {
        if a.is_empty() && b.is_empty() {
            return 0.0;
        }
        let gap = |c: Col| {
            if last == Some(c) {
                sc.extend_gap
            } else {
                sc.open_gap
            }
        };
        let mut best = f64::NEG_INFINITY;
        if !a.is_empty() && !b.is_empty() {
            let s = if a[0] == b[0] {
                sc.match_score
            } else {
                sc.mismatch
            };
            best = best.max(s + best_global(&a[1..], &b[1..], Some(Col::Pair), sc));
        }
        if !a.is_empty() {
            best = best.max(gap(Col::GapB) + best_global(&a[1..], b, Some(Col::GapB), sc));
        }
        if !b.is_empty() {
            best = best.max(gap(Col::GapA) + best_global(a, &b[1..], Some(Col::GapA), sc));
        }
        best
    }

    fn brute_force(a: &str, b: &str, sc: &AlignScoring) -> f64 {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut best = 0.0f64;
        for i0 in 0..=a.len() {
            for i1 in i0..=a.len() {
                for j0 in 0..=b.len() {
                    for j1 in j0..=b.len() {
                        best = best.max(best_global(&a[i0..i1], &b[j0..j1], None, sc));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn worked_scores() {
        let sc = AlignScoring::default();
        assert_eq!(local_alignment_score("abc", "abc", &sc), 3.0);
        assert_eq!(local_alignment_score("abc", "xyz", &sc), 0.0);
        assert_eq!(brute_force("ABCDE", "ABXDE", &sc), 3.0);
        assert_eq!(local_alignment_score("ABCDE", "ABXDE", &sc), 3.0);
        assert_eq!(local_alignment_score("", "abc", &sc), 0.0);
    }

    #[test]
    fn gap_cluster_costs_open_then_extend() {
        let sc = AlignScoring::default();
        assert_eq!(sc.gap_score(1), -1.0);
        assert_eq!(sc.gap_score(3), -2.0);
        // ABCD--EFGH vs ABCDxxEFGH: 8 matches and one 2-gap cluster
        assert_eq!(local_alignment_score("ABCDEFGH", "ABCDxxEFGH", &sc), 6.5);
        assert_eq!(brute_force("ABCDEFGH", "ABCDxxEFGH", &sc), 6.5);
    }

    #[test]
    fn cheap_open_does_not_split_clusters() {
        // open cheaper than extend: a two-gap run must still cost open + extend
        let sc = AlignScoring {
            open_gap: -0.5,
            extend_gap: -2.0,
            ..Default::default()
        };
        let got = local_alignment_score("ABCDEFGH", "ABCDxxEFGH", &sc);
        assert_eq!(got, brute_force("ABCDEFGH", "ABCDxxEFGH", &sc));
    }

    #[test]
    fn normalization() {
        let sc = AlignScoring::default();
        let n = |a: &str, b: &str| normalized_local_alignment_str(a, b, &sc);
        assert_eq!(n("hello world", "hello world"), 1.0);
        assert_eq!(n("aaaa", "bbbb"), 0.0);
        assert_eq!(n("", ""), 1.0);
        assert_eq!(n("", "x"), 0.0);
        assert!((n("ABCD", "ABCDXY") - 4.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_positive_penalties() {
        assert!(AlignScoring::default().validate().is_ok());
        let bad = AlignScoring {
            open_gap: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = AlignScoring {
            match_score: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_search(a in "[ab]{0,5}", b in "[abc]{0,5}") {
            let sc = AlignScoring::default();
            prop_assert_eq!(local_alignment_score(&a, &b, &sc), brute_force(&a, &b, &sc));
        }

        #[test]
        fn symmetric_and_bounded(a in "[abcd]{0,12}", b in "[abcd]{0,12}") {
            let sc = AlignScoring::default();
            let s = local_alignment_score(&a, &b, &sc);
            prop_assert_eq!(s, local_alignment_score(&b, &a, &sc));
            let cap = sc.match_score * a.len().min(b.len()) as f64;
            prop_assert!((0.0..=cap).contains(&s));
        }
    }
}
