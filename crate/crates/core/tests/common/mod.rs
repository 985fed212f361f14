#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use docxeval::runner::write_extraction;
use docxeval::{
    build_ground_truth, load_corpus, DocCategory, ExtractedTable, ExtractionResult, GroundTruth,
    IngestConfig, TokenizerConfig,
};

const DOCLAYNET_NAMES: [(DocCategory, &str); 6] = [
    (DocCategory::Financial, "financial_reports"),
    (DocCategory::Law, "laws_and_regulations"),
    (DocCategory::Manual, "manuals"),
    (DocCategory::Patent, "patents"),
    (DocCategory::Scientific, "scientific_articles"),
    (DocCategory::Tender, "government_tenders"),
];

fn raw_category(c: DocCategory) -> &'static str {
    DOCLAYNET_NAMES.iter().find(|(k, _)| *k == c).unwrap().1
}

pub fn write_annotation(dir: &Path, doc_id: &str, category: DocCategory, cells: Vec<Value>) {
    fs::create_dir_all(dir).unwrap();
    let body = json!({
        "metadata": { "doc_category": raw_category(category), "original_filename": format!("{doc_id}.pdf") },
        "cells": cells,
    });
    fs::write(
        dir.join(format!("{doc_id}.json")),
        serde_json::to_string_pretty(&body).unwrap(),
    )
    .unwrap();
}

fn word(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(1..=9);
    (0..len)
        .map(|_| rng.gen_range(b'a'..=b'z') as char)
        .collect()
}

pub fn vocabulary(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n).map(|_| word(rng)).collect()
}

/// Writes `per_category` synthetic pages for each category. Every page has a
/// header, a title, body paragraphs totalling about `tokens` words, up to
/// `max_tables` table cells with boxes, and a footer.
pub fn synthetic_corpus(
    dir: &Path,
    categories: &[DocCategory],
    per_category: usize,
    tokens: usize,
    max_tables: usize,
    seed: u64,
) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = vocabulary(&mut rng, 3000);
    let mut ids = Vec::new();
    for cat in categories {
        for n in 0..per_category {
            let doc_id = format!("{}-{n:04}", cat.as_str().to_lowercase());
            let mut cells = Vec::new();
            let mut next_id = 0u64;
            let mut push = |cells: &mut Vec<Value>, label: &str, text: String, bx: [f64; 4]| {
                cells.push(
                    json!({"id_box_line": next_id, "category": label, "text": text, "box": bx}),
                );
                next_id += 1;
            };
            push(
                &mut cells,
                "Page-header",
                format!("{} report {n}", cat),
                [50.0, 20.0, 400.0, 12.0],
            );
            push(
                &mut cells,
                "Title",
                "Quarterly overview".into(),
                [50.0, 60.0, 300.0, 20.0],
            );
            let mut remaining = tokens;
            let mut y = 100.0;
            let n_tables = if max_tables == 0 {
                0
            } else {
                rng.gen_range(0..=max_tables)
            };
            let mut tables_left = n_tables;
            while remaining > 0 {
                let len = remaining.min(rng.gen_range(20..80));
                let para: Vec<&str> = (0..len)
                    .map(|_| vocab.choose(&mut rng).unwrap().as_str())
                    .collect();
                push(&mut cells, "Text", para.join(" "), [50.0, y, 500.0, 40.0]);
                y += 50.0;
                remaining -= len;
                if tables_left > 0 && rng.gen_bool(0.5) {
                    let cells_n = rng.gen_range(4..16);
                    let t: Vec<String> = (0..cells_n)
                        .map(|_| format!("{}", rng.gen_range(0..10_000)))
                        .collect();
                    push(
                        &mut cells,
                        "Table",
                        t.join(" "),
                        [60.0, y, 300.0 + 10.0 * tables_left as f64, 80.0],
                    );
                    y += 90.0;
                    tables_left -= 1;
                }
            }
            while tables_left > 0 {
                let t: Vec<String> = (0..6)
                    .map(|_| format!("{}", rng.gen_range(0..10_000)))
                    .collect();
                push(&mut cells, "Table", t.join(" "), [60.0, y, 250.0, 60.0]);
                y += 70.0;
                tables_left -= 1;
            }
            push(
                &mut cells,
                "Page-footer",
                format!("Page {}", n + 1),
                [280.0, 780.0, 40.0, 10.0],
            );
            cells.shuffle(&mut rng);
            write_annotation(dir, &doc_id, *cat, cells);
            ids.push(doc_id);
        }
    }
    ids
}

pub fn ground_truths(corpus_dir: &Path) -> Vec<GroundTruth> {
    load_corpus(corpus_dir, &IngestConfig::default())
        .unwrap()
        .iter()
        .map(|d| build_ground_truth(d, &TokenizerConfig::default()))
        .collect()
}

pub fn gt_tables_as_extracted(gt: &GroundTruth, with_boxes: bool) -> Vec<ExtractedTable> {
    gt.tables
        .iter()
        .map(|t| ExtractedTable {
            cell_texts: t.cell_texts.clone(),
            bbox: with_boxes.then_some(t.bbox),
        })
        .collect()
}

/// Writes each page's own ground truth back as `tool`'s extraction.
pub fn write_identity_extractions(
    corpus_dir: &Path,
    results_dir: &Path,
    tool: &str,
    with_boxes: bool,
) {
    for gt in ground_truths(corpus_dir) {
        write_extraction(
            results_dir,
            &ExtractionResult {
                doc_id: gt.doc_id.clone(),
                tool_name: tool.into(),
                text: gt.combined_text.clone(),
                tables: gt_tables_as_extracted(&gt, with_boxes),
            },
        )
        .unwrap();
    }
}

/// A typical rule-based-extractor mangling: character typos, dropped
/// words, and neighbouring lines swapped.
pub fn corrupt(text: &str, rng: &mut ChaCha8Rng) -> String {
    let mut lines = Vec::new();
    for line in text.lines() {
        let mut kept = Vec::new();
        for w in line.split_whitespace() {
            if rng.gen_bool(0.04) {
                continue;
            }
            if rng.gen_bool(0.08) {
                let mut chars: Vec<char> = w.chars().collect();
                let i = rng.gen_range(0..chars.len());
                chars[i] = rng.gen_range(b'a'..=b'z') as char;
                kept.push(chars.into_iter().collect());
            } else {
                kept.push(w.to_string());
            }
        }
        lines.push(kept.join(" "));
    }
    if lines.len() > 2 {
        let i = rng.gen_range(0..lines.len() - 1);
        lines.swap(i, i + 1);
    }
    lines.join("\n")
}

pub fn write_noisy_extractions(corpus_dir: &Path, results_dir: &Path, tool: &str, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for gt in ground_truths(corpus_dir) {
        let text = corrupt(&gt.combined_text, &mut rng);
        write_extraction(
            results_dir,
            &ExtractionResult {
                doc_id: gt.doc_id.clone(),
                tool_name: tool.into(),
                text,
                tables: vec![],
            },
        )
        .unwrap();
    }
}
