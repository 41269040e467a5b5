mod batch;
mod commands;
mod pipeline;
mod stats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lottie_forge::model::ParseOptions;
use lottie_forge::tokenizer::{CountMode, EncodeOptions};

#[derive(Parser, Debug)]
#[command(name = "lottie-forge", version, about = "Lottie optimizer, keyframe tokenizer and structural scorer")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Significant digits kept by the optimizer.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    /// Round token literals to 4 significant digits.
    #[arg(long, global = true)]
    pub quantize: bool,
    /// Encode easing curves close to a catalog preset as one token.
    #[arg(long, global = true)]
    pub presets: bool,
    /// Worker threads for batch commands; LOTTIE_FORGE_JOBS takes precedence.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Reject 3D compositions and expressions; require SVG conversions to
    /// pass the bounding-box check.
    #[arg(long, global = true)]
    pub strict: bool,
    /// How reported token counts treat numeric literals.
    #[arg(long, global = true, value_enum, default_value_t = CountArg::Digits)]
    pub count_mode: CountArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountArg {
    /// One per token.
    Literal,
    /// One per character of each numeric literal.
    Digits,
}

impl Global {
    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions { strict: self.strict }
    }

    pub fn encode_options(&self) -> EncodeOptions {
        EncodeOptions {
            quantize: self.quantize,
            presets: self.presets,
        }
    }

    pub fn count_mode(&self) -> CountMode {
        match self.count_mode {
            CountArg::Literal => CountMode::Literal,
            CountArg::Digits => CountMode::Digits,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shrink a document or every document in a directory.
    Optimize(commands::OptimizeArgs),
    /// Write the token stream of a document.
    Tokenize(commands::TokenizeArgs),
    /// Rebuild a document from token text.
    Detokenize(commands::DetokenizeArgs),
    /// Check tokenize/detokenize fidelity over files or directories.
    Roundtrip(batch::RoundtripArgs),
    /// Sample a property over a frame range.
    Sample(commands::SampleArgs),
    /// Evaluate one easing curve.
    Ease(commands::EaseArgs),
    /// Structural similarity of a prediction against ground truth.
    Score(commands::ScoreArgs),
    /// Score every prediction in a directory against same-named ground truth.
    ScoreDir(batch::ScoreDirArgs),
    /// Convert static SVG to Lottie.
    ConvertSvg(batch::ConvertSvgArgs),
    /// Duration, size and token statistics of a corpus.
    Stats(stats::StatsArgs),
    /// Run several steps per file and aggregate one report.
    Pipeline(pipeline::PipelineArgs),
    /// Bucket a corpus by token count.
    Stratify(batch::StratifyArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::Optimize(args) => commands::optimize(g, args),
        Command::Tokenize(args) => commands::tokenize(g, args),
        Command::Detokenize(args) => commands::detokenize(args),
        Command::Roundtrip(args) => batch::roundtrip(g, args),
        Command::Sample(args) => commands::sample(g, args),
        Command::Ease(args) => commands::ease(args),
        Command::Score(args) => commands::score(args),
        Command::ScoreDir(args) => batch::score_dir(g, args),
        Command::ConvertSvg(args) => batch::convert_svg(g, args),
        Command::Stats(args) => stats::run(g, args),
        Command::Pipeline(args) => pipeline::run(g, args),
        Command::Stratify(args) => batch::stratify(g, args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `-o` target: a file, or stdout when absent.
pub fn write_output(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    use anyhow::Context;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.context("writing stdout"),
            }
        }
    }
}
