use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use log::info;

use docxeval::ingest::{build_ground_truth, BboxOrigin, IngestConfig};
use docxeval::runner::{
    self, emit_report, read_reports, render_report, Mode, ReportFormat, RunConfig,
};
use docxeval::tokenize::TokenizerConfig;

#[derive(Parser)]
#[command(
    name = "docxeval",
    version,
    about = "Score PDF extraction output against layout-annotation ground truth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write ground-truth text and tables for every annotation file.
    Gt {
        corpus_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_origin, default_value = "topleft")]
        bbox_origin: BboxOrigin,
        #[arg(long)]
        lowercase: bool,
    },
    /// Evaluate extraction records against the corpus.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        docs_per_category: Option<usize>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        #[arg(long)]
        token_threshold: Option<f64>,
        #[arg(long)]
        jaccard_threshold: Option<f64>,
        /// Repeat to score several IoU thresholds.
        #[arg(long)]
        iou_threshold: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_format)]
        format: Option<ReportFormat>,
    },
    /// Re-render a JSON report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: ReportFormat,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_origin(s: &str) -> std::result::Result<BboxOrigin, String> {
    match s.to_ascii_lowercase().as_str() {
        "center" => Ok(BboxOrigin::Center),
        "topleft" => Ok(BboxOrigin::Topleft),
        _ => Err(format!("expected center or topleft, got `{s}`")),
    }
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: docxeval::EvalError| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: docxeval::EvalError| e.to_string())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Gt {
            corpus_dir,
            out,
            bbox_origin,
            lowercase,
        } => {
            let ingest = IngestConfig {
                bbox_origin,
                ..Default::default()
            };
            let tokenizer = TokenizerConfig {
                lowercase,
                ..Default::default()
            };
            let docs = runner::load_corpus(&corpus_dir, &ingest)
                .with_context(|| format!("loading {}", corpus_dir.display()))?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for doc in &docs {
                let gt = build_ground_truth(doc, &tokenizer);
                fs::write(out.join(format!("{}.txt", gt.doc_id)), &gt.combined_text)?;
                let json = serde_json::to_string_pretty(&gt)? + "\n";
                fs::write(out.join(format!("{}.json", gt.doc_id)), json)?;
            }
            info!("wrote ground truth for {} documents", docs.len());
        }
        Command::Run {
            config,
            seed,
            docs_per_category,
            mode,
            token_threshold,
            jaccard_threshold,
            iou_threshold,
            output,
            format,
        } => {
            let mut cfg = RunConfig::load(&config)
                .with_context(|| format!("reading config {}", config.display()))?;
            if let Some(v) = seed {
                cfg.sample_seed = v;
            }
            if let Some(v) = docs_per_category {
                cfg.docs_per_category = Some(v);
            }
            if let Some(v) = mode {
                cfg.mode = v;
            }
            if let Some(v) = token_threshold {
                cfg.text.token_threshold = v;
            }
            if let Some(v) = jaccard_threshold {
                cfg.table.jaccard_threshold = v;
            }
            if !iou_threshold.is_empty() {
                cfg.table.iou_thresholds = iou_threshold;
            }
            if let Some(v) = output {
                cfg.output = v;
            }
            if let Some(v) = format {
                cfg.format = Some(v);
            }
            let reports = runner::run_evaluation(&cfg)?;
            emit_report(&reports, &cfg.output, cfg.format())?;
            info!("wrote {} rows to {}", reports.len(), cfg.output.display());
        }
        Command::Report { input, format, out } => {
            let reports = read_reports(&input)?;
            match out {
                Some(path) => emit_report(&reports, &path, format)?,
                None => print!("{}", render_report(&reports, format)?),
            }
        }
    }
    Ok(())
}
