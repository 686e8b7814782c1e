//! `lid`: filter, rebalance, and inspect corpora; train, run, and evaluate
//! the classifier. All randomness flows from the `--seed` flag (default 42);
//! no command reads the wall clock or environment for entropy.

pub mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lid_core::model::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "lid", version, about = "Language identification toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ingest a corpus manifest, clean lines, and drop lines whose text
    /// does not contain the expected script.
    Filter(FilterArgs),
    /// Rebalance a labeled corpus by temperature sampling.
    Sample(SampleArgs),
    /// Per-label line counts and fractions of a labeled corpus.
    Stats(StatsArgs),
    /// Train a classifier on a labeled corpus.
    Train(TrainArgs),
    /// Batch-predict labels for one text per input line.
    Predict(PredictArgs),
    /// Score predictions against gold labels.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    /// Manifest TSV: source_name, license, label-or-"perline", format, path.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output corpus in `__label__xxx_Yyyy text` format.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Input corpus in `__label__xxx_Yyyy text` format.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Number of lines to emit.
    #[arg(long)]
    pub target_total: u64,
    /// Temperature exponent applied to each label's corpus fraction.
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Input corpus in `__label__xxx_Yyyy text` format.
    #[arg(long)]
    pub input: PathBuf,
    /// Output TSV `label<TAB>count<TAB>fraction`; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Training corpus in `__label__xxx_Yyyy text` format.
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the model file.
    #[arg(long)]
    pub output: PathBuf,
    /// Initial learning rate.
    #[arg(long, default_value_t = 0.8, value_parser = positive_f64)]
    pub lr: f64,
    /// Embedding dimension.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..))]
    pub dim: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub epochs: u32,
    /// Minimum word occurrences for the word vocabulary.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_count: u64,
    /// Smallest character n-gram length.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub minn: u32,
    /// Largest character n-gram length.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub maxn: u32,
    /// Number of n-gram hash buckets.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub bucket: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Model file written by `lid train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Input file with one text per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Labels to emit per line.
    #[arg(short, long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Minimum probability for an emitted label.
    #[arg(long, default_value_t = 0.0, value_parser = probability)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Gold labels: `__label__xxx_Yyyy text` lines or bare codes.
    #[arg(long)]
    pub gold: PathBuf,
    /// Predicted labels, aligned line-by-line with the gold file; `lid
    /// predict` output is accepted as-is (the top-1 label is used).
    #[arg(long)]
    pub predictions: PathBuf,
    /// Restrict the test set to these labels (one per line) before scoring.
    #[arg(long)]
    pub supported: Option<PathBuf>,
    /// Normalize gold and predicted labels through a TSV mapping before
    /// scoring.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    /// Add a per-taxonomy-class summary from a `label<TAB>class` TSV.
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    /// Report format.
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    pub format: String,
    /// Report file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the confusion matrix as TSV to this path.
    #[arg(long)]
    pub confusion: Option<PathBuf>,
    /// Comma-separated label subset for the confusion TSV.
    #[arg(long, value_delimiter = ',')]
    pub confusion_labels: Option<Vec<String>>,
}

fn positive_f64(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(format!("must be a positive number, got {raw}"))
    }
}

fn probability(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(format!("must be in [0, 1], got {raw}"))
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Filter(args) => commands::filter(&args),
        Command::Sample(args) => commands::sample(&args),
        Command::Stats(args) => commands::stats(&args),
        Command::Train(args) => commands::train(&args),
        Command::Predict(args) => commands::predict(&args),
        Command::Eval(args) => commands::eval(&args),
    }
}
