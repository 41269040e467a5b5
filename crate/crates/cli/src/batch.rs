use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use lottie_forge::metrics::{self, Thresholds};
use lottie_forge::model::{canonical_equal, parse_with, serialize, Document};
use lottie_forge::svg_bridge;
use lottie_forge::tokenizer::{count_tokens, detokenize, tokenize_with, EncodeOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::Global;

pub const JOBS_ENV: &str = "LOTTIE_FORGE_JOBS";

/// Worker count: the environment variable wins over the flag; 0 lets the
/// pool pick one per core.
pub fn resolve_jobs(flag: Option<usize>) -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .or(flag)
        .unwrap_or(0)
}

/// Applies `f` to every path on a bounded pool, keeping input order.
pub fn par_map<T: Send>(g: &Global, paths: &[PathBuf], f: impl Fn(&Path) -> T + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_jobs(g.jobs))
        .build()
        .context("building worker pool")?;
    log::info!("{} files on {} workers", paths.len(), pool.current_num_threads());
    Ok(pool.install(|| paths.par_iter().map(|p| f(p)).collect()))
}

/// `path` itself, or the files directly inside it with extension `ext`,
/// sorted by name.
pub fn list_files(path: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .with_context(|| format!("reading {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext)))
        .collect();
    files.sort();
    Ok(files)
}

pub fn list_all(paths: &[PathBuf], ext: &str) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(list_files(p, ext)?);
    }
    Ok(out)
}

pub fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Report sink: a CSV file, or stdout when absent.
pub fn csv_writer(path: Option<&PathBuf>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

pub fn write_rows<R: Serialize>(path: Option<&PathBuf>, rows: &[R]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Source text and parsed document.
pub fn load(g: &Global, path: &Path) -> Result<(String, Document)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = parse_with(&text, g.parse_options()).with_context(|| format!("parsing {}", path.display()))?;
    Ok((text, doc))
}

/// Byte length of the source re-serialized without whitespace.
pub fn minified_len(text: &str) -> Result<usize> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    Ok(serde_json::to_string(&value)?.len())
}

pub fn token_counts(g: &Global, doc: &Document) -> Result<(usize, usize)> {
    let plain = tokenize_with(doc, EncodeOptions { quantize: false, ..g.encode_options() })?;
    let quant = tokenize_with(doc, EncodeOptions { quantize: true, ..g.encode_options() })?;
    Ok((count_tokens(&plain, g.count_mode()), count_tokens(&quant, g.count_mode())))
}

pub fn roundtrips(g: &Global, doc: &Document) -> Result<bool> {
    let tokens = tokenize_with(doc, g.encode_options())?;
    Ok(canonical_equal(doc, &detokenize(&tokens)?))
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    /// Lottie files or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// CSV report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Serialize, Debug)]
struct RoundtripRow {
    file: String,
    tokens_plain: Option<usize>,
    tokens_quant: Option<usize>,
    bytes_json: Option<usize>,
    roundtrip_ok: bool,
}

fn roundtrip_row(g: &Global, path: &Path) -> RoundtripRow {
    let mut row = RoundtripRow {
        file: file_name(path),
        tokens_plain: None,
        tokens_quant: None,
        bytes_json: None,
        roundtrip_ok: false,
    };
    let result = (|| -> Result<()> {
        let (text, doc) = load(g, path)?;
        row.bytes_json = Some(minified_len(&text)?);
        let (plain, quant) = token_counts(g, &doc)?;
        row.tokens_plain = Some(plain);
        row.tokens_quant = Some(quant);
        row.roundtrip_ok = roundtrips(g, &doc)?;
        Ok(())
    })();
    if let Err(e) = result {
        log::warn!("{}: {e:#}", row.file);
    } else if !row.roundtrip_ok {
        log::warn!("{}: decoded document differs", row.file);
    }
    row
}

pub fn roundtrip(g: &Global, args: RoundtripArgs) -> Result<ExitCode> {
    let files = list_all(&args.inputs, "json")?;
    let rows = par_map(g, &files, |p| roundtrip_row(g, p))?;
    write_rows(args.report.as_ref(), &rows)?;
    let ok = rows.iter().filter(|r| r.roundtrip_ok).count();
    eprintln!("roundtrip: {ok}/{} files lossless", rows.len());
    Ok(if ok == rows.len() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[derive(Args, Debug)]
pub struct ScoreDirArgs {
    /// Ground-truth directory.
    pub gt: PathBuf,
    /// Prediction directory; files are matched by name.
    pub pred: PathBuf,
    /// CSV report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Serialize, Debug)]
struct ScoreRow {
    file: String,
    valid: bool,
    key_f1: f64,
    value_match: f64,
    numeric_mae: f64,
    json_struct_sim: f64,
}

fn score_row(gt: &Path, pred_dir: &Path) -> Result<ScoreRow> {
    let file = file_name(gt);
    let gt_text = fs::read_to_string(gt).with_context(|| format!("reading {}", gt.display()))?;
    let pred_text = fs::read_to_string(pred_dir.join(&file)).unwrap_or_else(|_| {
        log::warn!("{file}: no prediction");
        String::new()
    });
    let r = metrics::score(&gt_text, &pred_text).with_context(|| format!("ground truth {file}"))?;
    Ok(ScoreRow {
        file,
        valid: r.valid,
        key_f1: r.key_f1,
        value_match: r.value_match,
        numeric_mae: r.numeric_mae,
        json_struct_sim: r.json_struct_sim,
    })
}

pub fn score_dir(g: &Global, args: ScoreDirArgs) -> Result<ExitCode> {
    let files = list_files(&args.gt, "json")?;
    let rows = par_map(g, &files, |p| score_row(p, &args.pred))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    write_rows(args.report.as_ref(), &rows)?;
    if !rows.is_empty() {
        let n = rows.len() as f64;
        let valid = rows.iter().filter(|r| r.valid).count() as f64 / n;
        let sim = rows.iter().map(|r| r.json_struct_sim).sum::<f64>() / n;
        eprintln!("score-dir: {} files, valid rate {valid:.4}, mean json_struct_sim {sim:.4}", rows.len());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct ConvertSvgArgs {
    /// SVG file or directory of SVG files.
    pub input: PathBuf,
    /// Output file, or output directory in batch mode.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Batch mode: CSV of rejected files and reasons.
    #[arg(long)]
    pub rejects: Option<PathBuf>,
}

fn convert_one(g: &Global, path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = svg_bridge::convert(&text)?;
    if g.strict {
        let report = svg_bridge::consistency_report(&text, &doc)?;
        if !report.consistent() {
            bail!("bounding boxes disagree by {:.3} px", report.max_deviation);
        }
    }
    Ok(doc)
}

#[derive(Serialize, Debug)]
struct RejectRow {
    file: String,
    reason: String,
}

pub fn convert_svg(g: &Global, args: ConvertSvgArgs) -> Result<ExitCode> {
    if args.input.is_file() {
        let doc = convert_one(g, &args.input)?;
        crate::write_output(args.output.as_ref(), &serialize(&doc))?;
        return Ok(ExitCode::SUCCESS);
    }
    let Some(out_dir) = &args.output else { bail!("batch mode needs -o <directory>") };
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let files = list_files(&args.input, "svg")?;
    let results = par_map(g, &files, |p| convert_one(g, p))?;
    let mut rejects = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(doc) => {
                let target = out_dir.join(path.with_extension("json").file_name().expect("file name"));
                fs::write(&target, serialize(&doc)).with_context(|| format!("writing {}", target.display()))?;
            }
            Err(e) => rejects.push(RejectRow {
                file: file_name(path),
                reason: format!("{e:#}"),
            }),
        }
    }
    eprintln!("convert-svg: {} converted, {} rejected", files.len() - rejects.len(), rejects.len());
    if let Some(path) = &args.rejects {
        write_rows(Some(path), &rejects)?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct StratifyArgs {
    /// Lottie files or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Medium and complex lower bounds, in tokens.
    #[arg(long, value_delimiter = ',', num_args = 1..=2, default_values_t = [2_000usize, 10_000])]
    pub thresholds: Vec<usize>,
    /// CSV report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Serialize, Debug)]
struct StratifyRow {
    file: String,
    tokens: usize,
    bucket: &'static str,
}

pub fn thresholds(values: &[usize]) -> Result<Thresholds> {
    match values {
        [medium, complex] if medium <= complex => Ok(Thresholds {
            medium: *medium,
            complex: *complex,
        }),
        _ => bail!("thresholds must be two ascending token counts"),
    }
}

pub fn stratify(g: &Global, args: StratifyArgs) -> Result<ExitCode> {
    let t = thresholds(&args.thresholds)?;
    let files = list_all(&args.inputs, "json")?;
    let counts = par_map(g, &files, |p| -> Result<usize> {
        let (_, doc) = load(g, p)?;
        let tokens = tokenize_with(&doc, g.encode_options())?;
        Ok(count_tokens(&tokens, g.count_mode()))
    })?;
    let mut rows = Vec::new();
    for (path, count) in files.iter().zip(counts) {
        match count {
            Ok(tokens) => rows.push(StratifyRow {
                file: file_name(path),
                tokens,
                bucket: t.classify(tokens).label(),
            }),
            Err(e) => log::warn!("{}: {e:#}", file_name(path)),
        }
    }
    write_rows(args.report.as_ref(), &rows)?;
    let buckets = metrics::stratify(rows.iter().map(|r| (r.file.as_str(), r.tokens)), t);
    let sizes: Vec<String> = buckets.iter().map(|(d, files)| format!("{}={}", d.label(), files.len())).collect();
    eprintln!("stratify: {}", sizes.join(" "));
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_sorted_matching_files() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["b.json", "a.json", "c.txt", "D.JSON"] {
            fs::write(dir.path().join(name), "{}").unwrap();
        }
        let names: Vec<String> = list_files(dir.path(), "json").unwrap().iter().map(|p| file_name(p)).collect();
        assert_eq!(names, ["D.JSON", "a.json", "b.json"]);
    }

    #[test]
    fn threshold_parsing() {
        assert_eq!(thresholds(&[1, 2]).unwrap(), Thresholds { medium: 1, complex: 2 });
        assert!(thresholds(&[3, 2]).is_err());
    }

    #[test]
    fn minified_length_ignores_whitespace() {
        assert_eq!(minified_len("{ \"a\" : [1, 2] }\n").unwrap(), "{\"a\":[1,2]}".len());
    }
}
