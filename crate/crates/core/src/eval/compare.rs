//! Cross-system comparison helpers: restricting a test set to the labels a
//! classifier supports, collapsing labels to coarser codes, and aggregating
//! scores by resourcedness class.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::corpus::LabeledLine;
use crate::error::{LidError, Result};
use crate::eval::EvalReport;
use crate::label::LanguageLabel;

/// Result of intersecting a gold set with a supported-label set.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub lines: Vec<LabeledLine>,
    /// Positions of the kept lines in the original list, for keeping an
    /// aligned prediction list in sync.
    pub kept_indices: Vec<usize>,
    /// Number of distinct gold labels that were removed.
    pub removed_label_count: usize,
}

/// Keeps only the gold lines whose label the classifier under comparison
/// claims to support, preserving order.
pub fn restrict_to_intersection(
    gold: &[LabeledLine],
    supported: &HashSet<LanguageLabel>,
) -> Result<Restricted> {
    if supported.is_empty() {
        return Err(LidError::InvalidParameter("supported label set is empty".into()));
    }
    let mut lines = Vec::new();
    let mut kept_indices = Vec::new();
    let mut removed: HashSet<LanguageLabel> = HashSet::new();
    for (i, line) in gold.iter().enumerate() {
        if supported.contains(&line.label) {
            kept_indices.push(i);
            lines.push(line.clone());
        } else {
            removed.insert(line.label);
        }
    }
    if lines.is_empty() {
        return Err(LidError::EmptyIntersection);
    }
    Ok(Restricted { lines, kept_indices, removed_label_count: removed.len() })
}

/// Many-to-one label rewrite rules, e.g. dialects onto a BCP-47
/// macrolanguage code.
#[derive(Clone, Debug, Default)]
pub struct LabelMapping {
    rules: HashMap<String, String>,
}

impl LabelMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>) {
        self.rules.insert(from.into(), to.into());
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Reads TSV rules `label<TAB>normalized_code` with `#` comments.
    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| LidError::SourceIo {
            name: path.display().to_string(),
            source,
        })?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut mapping = Self::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (from, to) = trimmed.split_once('\t').ok_or_else(|| LidError::BadManifest {
                line: lineno + 1,
                reason: "expected label<TAB>normalized_code".into(),
            })?;
            mapping.insert(from.trim(), to.trim());
        }
        Ok(mapping)
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.rules.get(label).map(String::as_str)
    }

    /// Element-wise application; every input label must have a rule.
    pub fn apply(&self, labels: &[String]) -> Result<Vec<String>> {
        labels
            .iter()
            .map(|l| {
                self.rules
                    .get(l)
                    .cloned()
                    .ok_or_else(|| LidError::UnmappedLabel(l.clone()))
            })
            .collect()
    }
}

/// Element-wise label normalization; see [`LabelMapping::apply`].
pub fn normalize_labels(labels: &[String], mapping: &LabelMapping) -> Result<Vec<String>> {
    mapping.apply(labels)
}

/// Label to resourcedness class (0 = least resourced, 5 = best resourced).
#[derive(Clone, Debug, Default)]
pub struct TaxonomyMap {
    class_of: HashMap<String, u8>,
}

impl TaxonomyMap {
    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| LidError::SourceIo {
            name: path.display().to_string(),
            source,
        })?;
        Self::from_reader(BufReader::new(file))
    }

    /// Reads TSV rows `label<TAB>class`; classes outside 0..=5 are rejected.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut class_of = HashMap::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (label, class) = trimmed.split_once('\t').ok_or_else(|| LidError::BadManifest {
                line: lineno + 1,
                reason: "expected label<TAB>class".into(),
            })?;
            let class: i64 = class.trim().parse().map_err(|_| LidError::BadManifest {
                line: lineno + 1,
                reason: format!("class {:?} is not an integer", class.trim()),
            })?;
            if !(0..=5).contains(&class) {
                return Err(LidError::TaxonomyClassOutOfRange(class));
            }
            class_of.insert(label.trim().to_string(), class as u8);
        }
        Ok(Self { class_of })
    }

    pub fn insert(&mut self, label: impl Into<String>, class: u8) -> Result<()> {
        if class > 5 {
            return Err(LidError::TaxonomyClassOutOfRange(i64::from(class)));
        }
        self.class_of.insert(label.into(), class);
        Ok(())
    }

    pub fn class_of(&self, label: &str) -> Option<u8> {
        self.class_of.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }
}

/// Per-taxonomy-class aggregate of an evaluation report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaxonomyRow {
    pub class: u8,
    pub label_count: usize,
    pub mean_f1: f64,
    pub mean_fpr: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TaxonomyReport {
    pub rows: Vec<TaxonomyRow>,
    /// Evaluated labels that the taxonomy does not cover.
    pub skipped_labels: usize,
}

/// Averages per-class F1 and FPR within each taxonomy class. Only classes
/// that participate in the macro averages are considered; evaluated labels
/// missing from the taxonomy are skipped and counted.
pub fn taxonomy_report(report: &EvalReport, taxonomy: &TaxonomyMap) -> TaxonomyReport {
    let mut buckets: BTreeMap<u8, Vec<(f64, f64)>> = BTreeMap::new();
    let mut skipped = 0;
    for metrics in report.per_class.iter().filter(|m| m.participates()) {
        match taxonomy.class_of(&metrics.label) {
            Some(class) => buckets.entry(class).or_default().push((metrics.f1, metrics.fpr)),
            None => skipped += 1,
        }
    }
    let rows = buckets
        .into_iter()
        .map(|(class, scores)| {
            let k = scores.len() as f64;
            TaxonomyRow {
                class,
                label_count: scores.len(),
                mean_f1: scores.iter().map(|s| s.0).sum::<f64>() / k,
                mean_fpr: scores.iter().map(|s| s.1).sum::<f64>() / k,
            }
        })
        .collect();
    TaxonomyReport { rows, skipped_labels: skipped }
}
