//! Corpus ingestion: manifest-driven loading, cleaning, script filtering,
//! temperature rebalancing, and per-language statistics.

mod clean;
mod sample;
mod script;

pub use clean::remove_nonprinting;
pub use sample::{largest_remainder_quotas, temperature_sample};
pub use script::{script_filter, ScriptSet};

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{LidError, Result};
use crate::label::{LanguageLabel, LABEL_PREFIX};

/// One training or evaluation example: cleaned text plus its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledLine {
    pub text: String,
    pub label: LanguageLabel,
}

/// How lines in a source file carry their label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceFormat {
    /// Every line is text; the manifest entry supplies the single label.
    PlainLines,
    /// Every line starts with `__label__xxx_Yyyy ` followed by the text.
    LabeledLines,
}

/// One source in a corpus manifest.
#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub source_name: String,
    pub license: String,
    /// `Some` for plain-lines sources; `None` when labels come per line.
    pub label: Option<LanguageLabel>,
    pub format: SourceFormat,
    pub path: PathBuf,
}

/// A flat declarative list of local corpus files.
#[derive(Clone, Debug, Default)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    /// Parses the TSV manifest format:
    /// `source_name<TAB>license<TAB>label-or-"perline"<TAB>format<TAB>path`.
    /// Blank lines and `#` comments are skipped. Relative paths are resolved
    /// against the manifest's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| LidError::SourceIo {
            name: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        Self::from_reader(BufReader::new(file), base)
    }

    pub fn from_reader<R: BufRead>(reader: R, base: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(LidError::BadManifest {
                    line: lineno,
                    reason: format!("expected 5 tab-separated fields, got {}", fields.len()),
                });
            }
            let format = match fields[3] {
                "plain-lines" => SourceFormat::PlainLines,
                "labeled-lines" => SourceFormat::LabeledLines,
                other => {
                    return Err(LidError::BadManifest {
                        line: lineno,
                        reason: format!("unknown format {other:?}"),
                    })
                }
            };
            let label = match (format, fields[2]) {
                (SourceFormat::LabeledLines, "perline") => None,
                (SourceFormat::LabeledLines, other) => {
                    return Err(LidError::BadManifest {
                        line: lineno,
                        reason: format!("labeled-lines sources must say \"perline\", got {other:?}"),
                    })
                }
                (SourceFormat::PlainLines, raw) => Some(LanguageLabel::parse(raw)?),
            };
            let raw_path = Path::new(fields[4]);
            let path =
                if raw_path.is_absolute() { raw_path.to_path_buf() } else { base.join(raw_path) };
            entries.push(ManifestEntry {
                source_name: fields[0].to_string(),
                license: fields[1].to_string(),
                label,
                format,
                path,
            });
        }
        Ok(Self { entries })
    }
}

/// What ingestion dropped and why.
#[derive(Clone, Debug, Default)]
pub struct IngestReport {
    pub lines_kept: u64,
    /// Lines that were empty after non-printing removal, per label.
    pub dropped_empty: BTreeMap<LanguageLabel, u64>,
    /// Lines with no character in the expected script, per label.
    pub dropped_script: BTreeMap<LanguageLabel, u64>,
}

impl IngestReport {
    pub fn dropped_total(&self) -> u64 {
        self.dropped_empty.values().sum::<u64>() + self.dropped_script.values().sum::<u64>()
    }
}

/// Reads every source in the manifest, cleans each line with
/// [`remove_nonprinting`], drops lines that come out empty or fail
/// [`script_filter`], and returns the surviving lines in source order.
pub fn ingest_manifest(manifest: &CorpusManifest) -> Result<(Vec<LabeledLine>, IngestReport)> {
    let mut lines = Vec::new();
    let mut report = IngestReport::default();
    for entry in &manifest.entries {
        let file = File::open(&entry.path).map_err(|source| LidError::SourceIo {
            name: entry.source_name.clone(),
            source,
        })?;
        for raw in BufReader::new(file).lines() {
            let raw = raw.map_err(|source| LidError::SourceIo {
                name: entry.source_name.clone(),
                source,
            })?;
            let (label, text) = match entry.format {
                SourceFormat::PlainLines => {
                    (entry.label.expect("validated at parse"), raw.as_str())
                }
                SourceFormat::LabeledLines => split_labeled_line(&raw)?,
            };
            let cleaned = remove_nonprinting(text);
            if cleaned.is_empty() {
                *report.dropped_empty.entry(label).or_default() += 1;
                continue;
            }
            let line = LabeledLine { text: cleaned, label };
            if script_filter(&line)? {
                report.lines_kept += 1;
                lines.push(line);
            } else {
                *report.dropped_script.entry(label).or_default() += 1;
            }
        }
    }
    Ok((lines, report))
}

/// Exact per-label line counts and fractions for a corpus.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusStats {
    pub per_label_lines: BTreeMap<LanguageLabel, u64>,
    pub total_lines: u64,
    pub fractions: BTreeMap<LanguageLabel, f64>,
}

pub fn corpus_stats(corpus: &[LabeledLine]) -> CorpusStats {
    let mut per_label_lines: BTreeMap<LanguageLabel, u64> = BTreeMap::new();
    for line in corpus {
        *per_label_lines.entry(line.label).or_default() += 1;
    }
    let total_lines = corpus.len() as u64;
    let fractions = per_label_lines
        .iter()
        .map(|(&label, &count)| (label, count as f64 / total_lines as f64))
        .collect();
    CorpusStats { per_label_lines, total_lines, fractions }
}

impl CorpusStats {
    /// Writes `label<TAB>count<TAB>fraction`, sorted by label.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (label, count) in &self.per_label_lines {
            writeln!(out, "{label}\t{count}\t{}", self.fractions[label])?;
        }
        Ok(())
    }
}

fn split_labeled_line(raw: &str) -> Result<(LanguageLabel, &str)> {
    let rest = raw
        .strip_prefix(LABEL_PREFIX)
        .ok_or_else(|| LidError::MalformedCode(raw.chars().take(24).collect()))?;
    let (code, text) = rest.split_once(' ').unwrap_or((rest, ""));
    Ok((LanguageLabel::parse(code)?, text))
}

/// Reads a file in `__label__xxx_Yyyy text` line format.
pub fn read_labeled_file(path: &Path) -> Result<Vec<LabeledLine>> {
    let file = File::open(path)
        .map_err(|source| LidError::SourceIo { name: path.display().to_string(), source })?;
    let mut lines = Vec::new();
    for raw in BufReader::new(file).lines() {
        let raw = raw?;
        if raw.is_empty() {
            continue;
        }
        let (label, text) = split_labeled_line(&raw)?;
        lines.push(LabeledLine { text: text.to_string(), label });
    }
    Ok(lines)
}

/// Writes a corpus in `__label__xxx_Yyyy text` line format.
pub fn write_labeled_file(path: &Path, corpus: &[LabeledLine]) -> Result<()> {
    let file = File::create(path)
        .map_err(|source| LidError::SourceIo { name: path.display().to_string(), source })?;
    let mut out = BufWriter::new(file);
    for line in corpus {
        writeln!(out, "{} {}", line.label.prefixed(), line.text)?;
    }
    out.flush()?;
    Ok(())
}
