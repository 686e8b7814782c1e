use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use lid_core::corpus::{
    self, corpus_stats, ingest_manifest, temperature_sample, CorpusManifest, LabeledLine,
};
use lid_core::eval::{
    evaluate, restrict_to_intersection, taxonomy_report, LabelMapping, TaxonomyMap,
    TaxonomyReport,
};
use lid_core::label::{LanguageLabel, LABEL_PREFIX};
use lid_core::model::{self, Hyperparams, Model, Prediction};

use crate::{EvalArgs, FilterArgs, PredictArgs, SampleArgs, StatsArgs, TrainArgs};

pub fn filter(args: &FilterArgs) -> anyhow::Result<()> {
    let manifest = CorpusManifest::from_path(&args.manifest)?;
    let (lines, report) = ingest_manifest(&manifest)?;
    corpus::write_labeled_file(&args.output, &lines)?;
    eprintln!("kept {} lines, dropped {}", report.lines_kept, report.dropped_total());
    for (label, n) in &report.dropped_script {
        eprintln!("dropped {n} {label} lines with no character in the expected script");
    }
    for (label, n) in &report.dropped_empty {
        eprintln!("dropped {n} {label} lines that were empty after cleaning");
    }
    Ok(())
}

pub fn sample(args: &SampleArgs) -> anyhow::Result<()> {
    let corpus = corpus::read_labeled_file(&args.input)?;
    let sampled = temperature_sample(&corpus, args.alpha, args.seed, args.target_total)?;
    corpus::write_labeled_file(&args.output, &sampled)?;
    eprintln!("sampled {} of {} lines (alpha {})", sampled.len(), corpus.len(), args.alpha);
    Ok(())
}

pub fn stats(args: &StatsArgs) -> anyhow::Result<()> {
    let corpus = corpus::read_labeled_file(&args.input)?;
    let stats = corpus_stats(&corpus);
    match &args.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            stats.write_tsv(&mut out)?;
            out.flush()?;
        }
        None => stats.write_tsv(std::io::stdout().lock())?,
    }
    Ok(())
}

pub fn train(args: &TrainArgs) -> anyhow::Result<()> {
    let hp = Hyperparams {
        epochs: args.epochs,
        lr0: args.lr,
        dim: args.dim,
        min_count: args.min_count,
        ngram_min: args.minn,
        ngram_max: args.maxn,
        bucket_size: args.bucket,
        threads: args.threads,
        seed: args.seed,
        ..Default::default()
    };
    hp.validate()?;
    let corpus = corpus::read_labeled_file(&args.input)
        .with_context(|| format!("reading training corpus {}", args.input.display()))?;
    let (model, report) = model::train(&corpus, &hp)?;
    model::save(&model, &args.output)?;
    eprintln!(
        "labels: {}  words: {}  parameters: {}",
        model.labels().len(),
        model.vocab().word_count(),
        model.parameter_count()
    );
    for (epoch, loss) in report.epoch_loss.iter().enumerate() {
        eprintln!("epoch {}: mean loss {loss:.6}", epoch + 1);
    }
    eprintln!(
        "trained on {} examples in {:.2}s ({:.0} lines/sec)",
        report.examples, report.wall_seconds, report.lines_per_sec
    );
    Ok(())
}

fn format_predictions(predictions: &[Prediction]) -> String {
    let mut line = String::new();
    for (i, p) in predictions.iter().enumerate() {
        if i > 0 {
            line.push('\t');
        }
        line.push_str(&p.label.prefixed());
        line.push('\t');
        line.push_str(&format!("{:.6}", p.probability));
    }
    line
}

fn predict_lines(model: &Model, lines: &[String], k: u32, threshold: f64, threads: u32) -> Vec<String> {
    let predict_one =
        |text: &String| format_predictions(&model.predict_topk(text, k as usize, threshold));
    let threads = (threads as usize).min(lines.len()).max(1);
    if threads == 1 {
        return lines.iter().map(predict_one).collect();
    }
    let chunk_size = lines.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = lines
            .chunks(chunk_size)
            .map(|chunk| scope.spawn(move || chunk.iter().map(predict_one).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("prediction thread panicked")).collect()
    })
}

pub fn predict(args: &PredictArgs) -> anyhow::Result<()> {
    let model = model::load(&args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    let input = File::open(&args.input)
        .with_context(|| format!("opening input {}", args.input.display()))?;
    let lines: Vec<String> =
        BufReader::new(input).lines().collect::<Result<_, _>>().context("reading input")?;

    let start = Instant::now();
    let rendered = predict_lines(&model, &lines, args.k, args.threshold, args.threads);
    let elapsed = start.elapsed().as_secs_f64();

    match &args.output {
        Some(path) => write_lines(path, &rendered)?,
        None => {
            let stdout = std::io::stdout().lock();
            let mut out = BufWriter::new(stdout);
            for line in &rendered {
                writeln!(out, "{line}")?;
            }
            out.flush()?;
        }
    }
    let rate = if elapsed > 0.0 { lines.len() as f64 / elapsed } else { 0.0 };
    eprintln!("predicted {} lines in {elapsed:.3}s ({rate:.0} lines/sec)", lines.len());
    Ok(())
}

fn write_lines(path: &Path, lines: &[String]) -> anyhow::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Gold files carry either `__label__xxx_Yyyy text` lines or bare codes.
/// Empty lines are an error: silently skipping them could shift the
/// line-by-line alignment with the prediction file.
fn read_gold_labels(path: &Path) -> anyhow::Result<Vec<LanguageLabel>> {
    let file =
        File::open(path).with_context(|| format!("opening gold file {}", path.display()))?;
    let mut labels = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let code = line.split_whitespace().next().with_context(|| {
            format!("{}:{}: empty gold line", path.display(), lineno + 1)
        })?;
        labels.push(LanguageLabel::parse(code)?);
    }
    Ok(labels)
}

/// Prediction files: the first tab- or space-separated field of each line,
/// with any `__label__` prefix stripped. Probabilities are ignored.
fn read_predicted_labels(path: &Path) -> anyhow::Result<Vec<String>> {
    let file = File::open(path)
        .with_context(|| format!("opening predictions file {}", path.display()))?;
    let mut labels = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let first = line.split(['\t', ' ']).find(|f| !f.is_empty()).with_context(|| {
            format!(
                "{}:{}: empty prediction line (re-run predict with --threshold 0)",
                path.display(),
                lineno + 1
            )
        })?;
        labels.push(first.strip_prefix(LABEL_PREFIX).unwrap_or(first).to_string());
    }
    Ok(labels)
}

fn read_label_set(path: &Path) -> anyhow::Result<HashSet<LanguageLabel>> {
    let file = File::open(path)
        .with_context(|| format!("opening supported-label file {}", path.display()))?;
    let mut set = HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        set.insert(LanguageLabel::parse(trimmed)?);
    }
    Ok(set)
}

#[derive(Serialize)]
struct IntersectionSummary {
    kept_lines: usize,
    removed_label_count: usize,
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    #[serde(flatten)]
    report: &'a lid_core::eval::EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    intersection: Option<IntersectionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    taxonomy: Option<&'a TaxonomyReport>,
}

pub fn eval(args: &EvalArgs) -> anyhow::Result<()> {
    let gold = read_gold_labels(&args.gold)?;
    let mut predictions = read_predicted_labels(&args.predictions)?;
    anyhow::ensure!(
        gold.len() == predictions.len(),
        "gold has {} lines but predictions has {}",
        gold.len(),
        predictions.len()
    );

    // 1. restrict to the supported intersection, 2. normalize, 3. score
    let mut intersection = None;
    let gold_lines: Vec<LabeledLine> =
        gold.into_iter().map(|label| LabeledLine { text: String::new(), label }).collect();
    let gold_lines = match &args.supported {
        Some(path) => {
            let supported = read_label_set(path)?;
            let restricted = restrict_to_intersection(&gold_lines, &supported)?;
            predictions = restricted.kept_indices.iter().map(|&i| predictions[i].clone()).collect();
            intersection = Some(IntersectionSummary {
                kept_lines: restricted.lines.len(),
                removed_label_count: restricted.removed_label_count,
            });
            restricted.lines
        }
        None => gold_lines,
    };
    let mut gold_labels: Vec<String> =
        gold_lines.iter().map(|line| line.label.to_string()).collect();
    if let Some(path) = &args.mapping {
        let mapping = LabelMapping::from_path(path)?;
        gold_labels = mapping.apply(&gold_labels)?;
        predictions = mapping.apply(&predictions)?;
    }

    let report = evaluate(&gold_labels, &predictions)?;
    let taxonomy = match &args.taxonomy {
        Some(path) => Some(taxonomy_report(&report, &TaxonomyMap::from_path(path)?)),
        None => None,
    };

    if let Some(path) = &args.confusion {
        let mut out = BufWriter::new(File::create(path)?);
        match &args.confusion_labels {
            Some(subset) => {
                let (minor, excluded) = report.confusion.subset(subset)?;
                minor.write_tsv(&mut out)?;
                eprintln!("confusion subset: {excluded} off-subset predictions excluded");
            }
            None => report.confusion.write_tsv(&mut out)?,
        }
        out.flush()?;
    }

    let output = EvalOutput { report: &report, intersection, taxonomy: taxonomy.as_ref() };
    let rendered = match args.format.as_str() {
        "text" => render_text(&output)?,
        _ => {
            let mut json = serde_json::to_string_pretty(&output)?;
            json.push('\n');
            json
        }
    };
    match &args.output {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn render_text(output: &EvalOutput) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    output.report.write_text(&mut buf)?;
    if let Some(summary) = &output.intersection {
        writeln!(
            buf,
            "intersection: kept {} lines, removed {} unsupported labels",
            summary.kept_lines, summary.removed_label_count
        )?;
    }
    if let Some(taxonomy) = &output.taxonomy {
        writeln!(buf)?;
        writeln!(buf, "{:<6} {:>6} {:>9} {:>9}", "class", "count", "mean f1", "mean fpr")?;
        for row in &taxonomy.rows {
            writeln!(
                buf,
                "{:<6} {:>6} {:>9.4} {:>9.4}",
                row.class, row.label_count, row.mean_f1, row.mean_fpr
            )?;
        }
        if taxonomy.skipped_labels > 0 {
            writeln!(buf, "skipped {} labels missing from the taxonomy", taxonomy.skipped_labels)?;
        }
    }
    Ok(String::from_utf8(buf)?)
}
