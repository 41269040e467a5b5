use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use lottie_forge::easing::{
    easing_slope, ease_preset_lookup, preset, sample_property_traced, solve_u_traced, EasingCurve,
};
use lottie_forge::metrics;
use lottie_forge::model::{serialize, serialize_pretty, Document, Point};
use lottie_forge::optimizer::{optimize as optimize_doc, size_report, OptimizeConfig};
use lottie_forge::tokenizer::{count_tokens, detokenize as decode, parse_text, render_text, tokenize_with};
use serde::Serialize;

use crate::batch::{self, file_name, load, minified_len, par_map};
use crate::{write_output, Global};

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Lottie file, or a directory for batch mode.
    pub input: PathBuf,
    /// Output file, or output directory in batch mode; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Keep `nm` layer and shape names.
    #[arg(long)]
    pub keep_names: bool,
    #[arg(long)]
    pub keep_expressions: bool,
    /// Batch mode: CSV size report; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

pub fn optimize_config(g: &Global, keep_names: bool, keep_expressions: bool) -> OptimizeConfig {
    let mut cfg = OptimizeConfig {
        significant_digits: g.digits,
        remove_expressions: !keep_expressions,
        ..OptimizeConfig::default()
    };
    if keep_names {
        cfg.prune_fields.retain(|f| f != "nm");
    }
    cfg
}

#[derive(Serialize, Debug)]
struct SizeRow {
    file: String,
    bytes_before: usize,
    bytes_after: usize,
    ratio: f64,
}

pub fn optimize(g: &Global, args: OptimizeArgs) -> Result<ExitCode> {
    let cfg = optimize_config(g, args.keep_names, args.keep_expressions);
    let render = |doc: &Document| if args.pretty { serialize_pretty(doc) } else { serialize(doc) };
    if args.input.is_file() {
        let (text, doc) = load(g, &args.input)?;
        let out = render(&optimize_doc(&doc, &cfg));
        let minified = serde_json::to_string(&serde_json::from_str::<serde_json::Value>(&text)?)?;
        let r = size_report(&minified, &out);
        write_output(args.output.as_ref(), &out)?;
        eprintln!(
            "optimize: {} -> {} bytes ({:.1}% smaller)",
            r.bytes_before,
            r.bytes_after,
            r.reduction * 100.0
        );
        return Ok(ExitCode::SUCCESS);
    }
    let Some(out_dir) = &args.output else { bail!("batch mode needs -o <directory>") };
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let files = batch::list_files(&args.input, "json")?;
    let results = par_map(g, &files, |path| -> Result<SizeRow> {
        let (text, doc) = load(g, path)?;
        let out = render(&optimize_doc(&doc, &cfg));
        let target = out_dir.join(file_name(path));
        fs::write(&target, &out).with_context(|| format!("writing {}", target.display()))?;
        let before = minified_len(&text)?;
        Ok(SizeRow {
            file: file_name(path),
            bytes_before: before,
            bytes_after: out.len(),
            ratio: if before == 0 { 1.0 } else { out.len() as f64 / before as f64 },
        })
    })?;
    let mut rows = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => log::warn!("{}: {e:#}", file_name(path)),
        }
    }
    batch::write_rows(args.report.as_ref(), &rows)?;
    let (before, after): (usize, usize) = rows.iter().fold((0, 0), |(b, a), r| (b + r.bytes_before, a + r.bytes_after));
    if before > 0 {
        eprintln!(
            "optimize: {} files, {before} -> {after} bytes ({:.1}% smaller)",
            rows.len(),
            (1.0 - after as f64 / before as f64) * 100.0
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct TokenizeArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Print the token count instead of the stream.
    #[arg(long)]
    pub count: bool,
}

pub fn tokenize(g: &Global, args: TokenizeArgs) -> Result<ExitCode> {
    let (_, doc) = load(g, &args.input)?;
    let tokens = tokenize_with(&doc, g.encode_options())?;
    if args.count {
        write_output(args.output.as_ref(), &count_tokens(&tokens, g.count_mode()).to_string())?;
    } else {
        write_output(args.output.as_ref(), &render_text(&tokens))?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct DetokenizeArgs {
    /// Token text file.
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

pub fn detokenize(args: DetokenizeArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let doc = decode(&parse_text(&text)?)?;
    let out = if args.pretty { serialize_pretty(&doc) } else { serialize(&doc) };
    write_output(args.output.as_ref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    pub input: PathBuf,
    /// Property key path, e.g. `layers[0].ks.r`.
    #[arg(long)]
    pub path: String,
    /// `start:end:step`, end inclusive.
    #[arg(long)]
    pub frames: String,
    #[arg(long)]
    pub csv: bool,
}

pub fn frame_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad frame range {spec:?}"))?;
    let (start, end, step) = match parts.as_slice() {
        [s, e] => (*s, *e, 1.0),
        [s, e, st] => (*s, *e, *st),
        _ => bail!("frame range must be start:end[:step]"),
    };
    if !(step > 0.0) || end < start {
        bail!("frame range needs start <= end and a positive step");
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

pub fn sample(g: &Global, args: SampleArgs) -> Result<ExitCode> {
    let (_, doc) = load(g, &args.input)?;
    let prop = doc.find_property(&args.path).ok_or_else(|| {
        let known: Vec<String> = doc.vector_properties().into_iter().map(|(p, _)| p).take(8).collect();
        anyhow!("no property {:?}; e.g. {}", args.path, known.join(", "))
    })?;
    let frames = frame_range(&args.frames)?;
    let mut w = csv::WriterBuilder::new()
        .delimiter(if args.csv { b',' } else { b'\t' })
        .from_writer(std::io::stdout());
    let dims = match prop.keyframes().first() {
        Some(kf) => kf.value.len(),
        None => sample_property_traced(prop, 0.0).value.len(),
    };
    let mut header = vec!["frame".to_string(), "t_norm".into(), "u".into(), "t_eased".into()];
    if dims == 1 {
        header.push("value".into());
    } else {
        header.extend((0..dims).map(|i| format!("value_{i}")));
    }
    w.write_record(&header)?;
    for f in frames {
        let s = sample_property_traced(prop, f);
        let mut record = vec![fmt(f), fmt(s.t_norm), fmt(s.u), fmt(s.t_eased)];
        record.extend(s.value.iter().map(|v| fmt(*v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

#[derive(Args, Debug)]
pub struct EaseArgs {
    /// Outgoing handle `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub p1: String,
    /// Incoming handle `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub p2: String,
    /// Normalized time in [0, 1].
    #[arg(long)]
    pub t: f64,
}

fn point(text: &str) -> Result<Point> {
    match text.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>() {
        Ok(v) if v.len() == 2 => Ok(Point::new(v[0], v[1])),
        _ => bail!("expected `x,y`, got {text:?}"),
    }
}

pub fn ease(args: EaseArgs) -> Result<ExitCode> {
    let (p1, p2) = (point(&args.p1)?, point(&args.p2)?);
    let curve = EasingCurve::new(p1.x, p1.y, p2.x, p2.y);
    let trace = solve_u_traced(&curve, args.t)?;
    println!("t_norm      {}", fmt(args.t));
    println!("u           {}", fmt(trace.u));
    println!("t_eased     {}", fmt(curve.y(trace.u)));
    println!("slope       {}", fmt(easing_slope(&curve, args.t)?));
    println!("newton      {}{}", trace.newton_iterations, if trace.used_bisection { " (bisection)" } else { "" });
    match ease_preset_lookup(p1, p2).and_then(preset) {
        Some(p) => println!("preset      EASE_{} {}", p.id, p.name),
        None => println!("preset      none"),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

pub fn score(args: ScoreArgs) -> Result<ExitCode> {
    let gt = fs::read_to_string(&args.gt).with_context(|| format!("reading {}", args.gt.display()))?;
    let pred = fs::read_to_string(&args.pred).with_context(|| format!("reading {}", args.pred.display()))?;
    let r = metrics::score(&gt, &pred)?;
    let diagnostic = metrics::validity_check(&pred).diagnostic;
    if args.json {
        let value = serde_json::json!({
            "valid": r.valid,
            "diagnostic": diagnostic,
            "common": r.common,
            "missing": r.missing,
            "extra": r.extra,
            "key_f1": r.key_f1,
            "value_match": r.value_match,
            "numeric_mae": r.numeric_mae,
            "json_struct_sim": r.json_struct_sim,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else if args.csv {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(["valid", "key_f1", "value_match", "numeric_mae", "json_struct_sim"])?;
        w.write_record([
            r.valid.to_string(),
            r.key_f1.to_string(),
            r.value_match.to_string(),
            r.numeric_mae.to_string(),
            r.json_struct_sim.to_string(),
        ])?;
        w.flush()?;
    } else {
        println!("{r}");
        if let Some(d) = diagnostic {
            println!("{d}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_ranges() {
        assert_eq!(frame_range("30:46:8").unwrap(), [30.0, 38.0, 46.0]);
        assert_eq!(frame_range("0:1").unwrap(), [0.0, 1.0]);
        assert_eq!(frame_range("0:1:0.25").unwrap().len(), 5);
        assert!(frame_range("5:1").is_err());
        assert!(frame_range("0:1:0").is_err());
        assert!(frame_range("a:b").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(point("0.3,-2.79").unwrap(), Point::new(0.3, -2.79));
        assert!(point("1").is_err());
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt(1.5), "1.5");
        assert_eq!(fmt(-119.4541714), "-119.454171");
        assert_eq!(fmt(-0.0000001), "0");
        assert_eq!(fmt(30.0), "30");
    }
}
