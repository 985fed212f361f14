use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{EvalError, Result};
use crate::types::{AnnotatedDocument, DocCategory};

/// Picks exactly `k` documents from every category present in `corpus`.
///
/// Each category is ordered by `doc_id` and then shuffled with its own
/// stream derived from `seed`, so the pick for one category does not change
/// when documents of another category are added or removed. The result is
/// grouped by category and sorted by `doc_id` inside each group.
pub fn sample_balanced(
    corpus: &[AnnotatedDocument],
    k: usize,
    seed: u64,
) -> Result<Vec<&AnnotatedDocument>> {
    let mut by_cat: BTreeMap<DocCategory, Vec<&AnnotatedDocument>> = BTreeMap::new();
    for doc in corpus {
        by_cat.entry(doc.category).or_default().push(doc);
    }
    let mut out = Vec::with_capacity(by_cat.len() * k);
    for (category, mut docs) in by_cat {
        if docs.len() < k {
            return Err(EvalError::InsufficientCategory {
                category,
                available: docs.len(),
                requested: k,
            });
        }
        docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        let stream = seed ^ (category as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let (picked, _) = docs.partial_shuffle(&mut rng, k);
        let mut picked = picked.to_vec();
        picked.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        out.extend(picked);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(per_cat: usize) -> Vec<AnnotatedDocument> {
        DocCategory::ALL
            .iter()
            .flat_map(|c| {
                (0..per_cat).map(move |i| AnnotatedDocument {
                    doc_id: format!("{c}-{i:03}"),
                    category: *c,
                    cells: vec![],
                })
            })
            .collect()
    }

    fn ids(docs: &[&AnnotatedDocument]) -> Vec<String> {
        docs.iter().map(|d| d.doc_id.clone()).collect()
    }

    #[test]
    fn one_per_category() {
        let c = corpus(5);
        let s = sample_balanced(&c, 1, 42).unwrap();
        assert_eq!(s.len(), 6);
        for cat in DocCategory::ALL {
            assert_eq!(s.iter().filter(|d| d.category == cat).count(), 1);
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let c = corpus(20);
        let a = ids(&sample_balanced(&c, 4, 9).unwrap());
        let b = ids(&sample_balanced(&c, 4, 9).unwrap());
        assert_eq!(a, b);
        let mut reversed = c.clone();
        reversed.reverse();
        assert_eq!(a, ids(&sample_balanced(&reversed, 4, 9).unwrap()));
        let other = ids(&sample_balanced(&c, 4, 10).unwrap());
        assert_ne!(a, other);
    }

    #[test]
    fn category_pick_ignores_other_categories() {
        let c = corpus(20);
        let only_law: Vec<_> = c
            .iter()
            .filter(|d| d.category == DocCategory::Law)
            .cloned()
            .collect();
        let full: Vec<String> = sample_balanced(&c, 3, 1)
            .unwrap()
            .into_iter()
            .filter(|d| d.category == DocCategory::Law)
            .map(|d| d.doc_id.clone())
            .collect();
        assert_eq!(full, ids(&sample_balanced(&only_law, 3, 1).unwrap()));
    }

    #[test]
    fn too_few_documents() {
        let mut c = corpus(3);
        c.retain(|d| !(d.category == DocCategory::Patent && d.doc_id.ends_with("002")));
        match sample_balanced(&c, 3, 0) {
            Err(EvalError::InsufficientCategory {
                category,
                available,
                requested,
            }) => {
                assert_eq!(category, DocCategory::Patent);
                assert_eq!((available, requested), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
