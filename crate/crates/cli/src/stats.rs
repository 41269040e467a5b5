use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Args;
use lottie_forge::model::serialize;
use lottie_forge::optimizer::optimize;
use serde::{Deserialize, Serialize};

use crate::batch::{self, file_name, load, minified_len, par_map, token_counts};
use crate::commands::optimize_config;
use crate::Global;

/// Duration buckets in seconds, half-open `[lo, hi)`.
pub const DURATION_BUCKETS: [(f64, f64, &str); 6] = [
    (0.0, 1.0, "0-1s"),
    (1.0, 2.0, "1-2s"),
    (2.0, 3.0, "2-3s"),
    (3.0, 5.0, "3-5s"),
    (5.0, 10.0, "5-10s"),
    (10.0, f64::INFINITY, "10s+"),
];

pub fn duration_bucket(seconds: f64) -> usize {
    DURATION_BUCKETS
        .iter()
        .position(|&(lo, hi, _)| (lo..hi).contains(&seconds))
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileStats {
    pub file: String,
    pub frames: f64,
    pub duration_s: f64,
    pub bucket: &'static str,
    pub bytes_before: usize,
    pub bytes_after: usize,
    pub tokens_plain: Option<usize>,
    pub tokens_quant: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub files: usize,
    pub failed: usize,
    pub total_frames: f64,
    pub mean_frames: f64,
    pub median_frames: f64,
    pub total_duration_s: f64,
    pub mean_duration_s: f64,
    pub median_duration_s: f64,
    pub histogram: Vec<Bucket>,
    pub mean_bytes_before: f64,
    pub mean_bytes_after: f64,
    pub mean_tokens_plain: f64,
    pub mean_tokens_quant: f64,
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => 0.0,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

pub fn aggregate(files: &[FileStats], failed: usize) -> CorpusStats {
    let frames: Vec<f64> = files.iter().map(|f| f.frames).collect();
    let durations: Vec<f64> = files.iter().map(|f| f.duration_s).collect();
    let mut histogram: Vec<Bucket> = DURATION_BUCKETS
        .iter()
        .map(|&(_, _, label)| Bucket {
            label: label.to_string(),
            count: 0,
        })
        .collect();
    for d in &durations {
        histogram[duration_bucket(*d)].count += 1;
    }
    let collect = |f: fn(&FileStats) -> Option<f64>| files.iter().filter_map(f).collect::<Vec<f64>>();
    CorpusStats {
        files: files.len(),
        failed,
        total_frames: frames.iter().sum(),
        mean_frames: mean(&frames),
        median_frames: median(&frames),
        total_duration_s: durations.iter().sum(),
        mean_duration_s: mean(&durations),
        median_duration_s: median(&durations),
        histogram,
        mean_bytes_before: mean(&collect(|f| Some(f.bytes_before as f64))),
        mean_bytes_after: mean(&collect(|f| Some(f.bytes_after as f64))),
        mean_tokens_plain: mean(&collect(|f| f.tokens_plain.map(|t| t as f64))),
        mean_tokens_quant: mean(&collect(|f| f.tokens_quant.map(|t| t as f64))),
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "files            {} ({} failed)", self.files, self.failed)?;
        writeln!(
            f,
            "frames           total {:.0}, mean {:.2}, median {:.2}",
            self.total_frames, self.mean_frames, self.median_frames
        )?;
        writeln!(
            f,
            "duration (s)     total {:.2}, mean {:.2}, median {:.2}",
            self.total_duration_s, self.mean_duration_s, self.median_duration_s
        )?;
        for b in &self.histogram {
            let share = if self.files == 0 { 0.0 } else { b.count as f64 / self.files as f64 * 100.0 };
            writeln!(f, "  {:<6} {:>6} ({share:.1}%)", b.label, b.count)?;
        }
        writeln!(f, "bytes            before {:.1}, after {:.1}", self.mean_bytes_before, self.mean_bytes_after)?;
        write!(f, "tokens           plain {:.1}, quantized {:.1}", self.mean_tokens_plain, self.mean_tokens_quant)
    }
}

pub fn file_stats(g: &Global, path: &Path) -> Result<FileStats> {
    let (text, doc) = load(g, path)?;
    let frames = doc.meta.duration_frames();
    let duration_s = doc.meta.duration_seconds();
    let optimized = serialize(&optimize(&doc, &optimize_config(g, false, false)));
    let tokens = token_counts(g, &doc)
        .map_err(|e| log::warn!("{}: {e:#}", file_name(path)))
        .ok();
    Ok(FileStats {
        file: file_name(path),
        frames,
        duration_s,
        bucket: DURATION_BUCKETS[duration_bucket(duration_s)].2,
        bytes_before: minified_len(&text)?,
        bytes_after: optimized.len(),
        tokens_plain: tokens.map(|t| t.0),
        tokens_quant: tokens.map(|t| t.1),
    })
}

/// Per-file stats for every JSON file under `inputs`, plus the failure count.
pub fn collect(g: &Global, inputs: &[PathBuf]) -> Result<(Vec<FileStats>, usize)> {
    let files = batch::list_all(inputs, "json")?;
    let results = par_map(g, &files, |p| file_stats(g, p))?;
    let mut ok = Vec::new();
    let mut failed = 0;
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(s) => ok.push(s),
            Err(e) => {
                failed += 1;
                log::warn!("{}: {e:#}", file_name(path));
            }
        }
    }
    Ok((ok, failed))
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Lottie files or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Per-file CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Aggregate statistics as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn run(g: &Global, args: StatsArgs) -> Result<ExitCode> {
    let (files, failed) = collect(g, &args.inputs)?;
    let stats = aggregate(&files, failed);
    if let Some(path) = &args.csv {
        batch::write_rows(Some(path), &files)?;
    }
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&stats)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{stats}");
    Ok(ExitCode::SUCCESS)
}
