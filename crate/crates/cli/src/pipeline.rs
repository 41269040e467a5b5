use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lottie_forge::metrics;
use lottie_forge::model::{serialize, Document};
use lottie_forge::optimizer::optimize;
use lottie_forge::tokenizer::{count_tokens, tokenize_with};
use serde::Serialize;

use crate::batch::{self, file_name, load, minified_len, par_map, roundtrips, thresholds};
use crate::commands::optimize_config;
use crate::stats::{self, FileStats, DURATION_BUCKETS};
use crate::Global;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Optimize,
    Tokenize,
    Roundtrip,
    Score,
    Stratify,
    Stats,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    /// Directory of Lottie files.
    pub dir: PathBuf,
    /// Steps to run, in order; later steps see the optimized document.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "optimize,tokenize,roundtrip,score")]
    pub steps: Vec<Step>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Medium and complex lower bounds for the stratify step.
    #[arg(long, value_delimiter = ',', num_args = 1..=2, default_values_t = [2_000usize, 10_000])]
    pub thresholds: Vec<usize>,
}

#[derive(Serialize, Debug, Default, Clone, PartialEq)]
pub struct PipelineRow {
    pub file: String,
    pub bytes_before: usize,
    pub bytes_after: Option<usize>,
    pub tokens: Option<usize>,
    pub roundtrip_ok: Option<bool>,
    pub json_struct_sim: Option<f64>,
    pub bucket: Option<&'static str>,
    pub error: Option<String>,
}

fn process(g: &Global, path: &Path, steps: &[Step], t: metrics::Thresholds) -> Result<(PipelineRow, FileStats)> {
    let (text, original) = load(g, path)?;
    let mut row = PipelineRow {
        file: file_name(path),
        bytes_before: minified_len(&text)?,
        ..PipelineRow::default()
    };
    let mut doc: Document = original.clone();
    let mut tokens = None;
    for step in steps {
        match step {
            Step::Optimize => {
                doc = optimize(&doc, &optimize_config(g, false, false));
                row.bytes_after = Some(serialize(&doc).len());
            }
            Step::Tokenize | Step::Stratify => {
                let count = match tokens {
                    Some(c) => c,
                    None => count_tokens(&tokenize_with(&doc, g.encode_options())?, g.count_mode()),
                };
                tokens = Some(count);
                row.tokens = Some(count);
                if *step == Step::Stratify {
                    row.bucket = Some(t.classify(count).label());
                }
            }
            Step::Roundtrip => row.roundtrip_ok = Some(roundtrips(g, &doc)?),
            Step::Score => {
                let r = metrics::score(&text, &serialize(&doc))?;
                row.json_struct_sim = Some(r.json_struct_sim);
            }
            Step::Stats => {}
        }
    }
    let duration_s = original.meta.duration_seconds();
    let counts = batch::token_counts(g, &doc).ok();
    let file_stats = FileStats {
        file: row.file.clone(),
        frames: original.meta.duration_frames(),
        duration_s,
        bucket: DURATION_BUCKETS[stats::duration_bucket(duration_s)].2,
        bytes_before: row.bytes_before,
        bytes_after: serialize(&doc).len(),
        tokens_plain: counts.map(|c| c.0),
        tokens_quant: counts.map(|c| c.1),
    };
    Ok((row, file_stats))
}

pub fn run(g: &Global, args: PipelineArgs) -> Result<ExitCode> {
    if args.steps.is_empty() {
        bail!("no steps given");
    }
    let t = thresholds(&args.thresholds)?;
    let files = batch::list_files(&args.dir, "json")?;
    let results = par_map(g, &files, |p| process(g, p, &args.steps, t))?;
    let mut rows = Vec::with_capacity(files.len());
    let mut file_stats = Vec::new();
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok((row, s)) => {
                rows.push(row);
                file_stats.push(s);
            }
            Err(e) => {
                log::warn!("{}: {e:#}", file_name(path));
                rows.push(PipelineRow {
                    file: file_name(path),
                    error: Some(format!("{e:#}")),
                    ..PipelineRow::default()
                });
            }
        }
    }
    batch::write_rows(args.report.as_ref(), &rows)?;
    let failed_rows = rows.iter().filter(|r| r.error.is_some()).count();
    if args.steps.contains(&Step::Stats) {
        eprintln!("{}", stats::aggregate(&file_stats, failed_rows));
    }
    let broken = rows.iter().filter(|r| r.roundtrip_ok == Some(false)).count();
    eprintln!("pipeline: {} files, {failed_rows} unreadable, {broken} roundtrip failures", rows.len());
    Ok(if broken > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Harness {
        #[command(flatten)]
        args: PipelineArgs,
    }

    #[test]
    fn parses_step_list() {
        let h = Harness::parse_from(["x", "dir", "--steps", "optimize,stratify,stats"]);
        assert_eq!(h.args.steps, [Step::Optimize, Step::Stratify, Step::Stats]);
        assert_eq!(h.args.thresholds, [2000, 10000]);
    }

    #[test]
    fn rejects_unknown_step() {
        assert!(Harness::try_parse_from(["x", "dir", "--steps", "render"]).is_err());
    }
}
