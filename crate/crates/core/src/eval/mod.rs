//! Evaluation protocol: confusion matrices, per-class precision / recall /
//! F1 / FPR, macro averages, label-set intersection, cross-system label
//! normalization, taxonomy breakdowns, and size-score correlation.
//!
//! Evaluation works on plain label strings so that normalized codes (which
//! need not be `xxx_Yyyy`) can be scored with the same machinery.

mod compare;
mod pearson;

pub use compare::{
    normalize_labels, restrict_to_intersection, taxonomy_report, LabelMapping, Restricted,
    TaxonomyMap, TaxonomyReport, TaxonomyRow,
};
pub use pearson::pearson;

use std::collections::HashMap;
use std::io::{self, Write};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{LidError, Result};

/// Gold-by-predicted count matrix over a fixed label universe.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(LidError::InvalidParameter(format!("duplicate label {label:?}")));
            }
        }
        let n = labels.len();
        Ok(Self { labels, index, counts: vec![0; n * n] })
    }

    /// Builds the matrix from aligned gold/prediction lists. Without an
    /// explicit universe the label set is the sorted union of both sides.
    pub fn from_pairs(
        gold: &[String],
        predictions: &[String],
        universe: Option<&[String]>,
    ) -> Result<Self> {
        if gold.len() != predictions.len() {
            return Err(LidError::LengthMismatch {
                gold: gold.len(),
                predictions: predictions.len(),
            });
        }
        let labels: Vec<String> = match universe {
            Some(labels) => labels.to_vec(),
            None => {
                let mut labels: Vec<String> =
                    gold.iter().chain(predictions).cloned().collect();
                labels.sort();
                labels.dedup();
                labels
            }
        };
        let mut matrix = Self::new(labels)?;
        for (g, p) in gold.iter().zip(predictions) {
            matrix.record(g, p)?;
        }
        Ok(matrix)
    }

    pub fn record(&mut self, gold: &str, predicted: &str) -> Result<()> {
        let g = self.index_of(gold)?;
        let p = self.index_of(predicted)?;
        self.counts[g * self.labels.len() + p] += 1;
        Ok(())
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| LidError::LabelOutsideUniverse(label.to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn count(&self, gold: usize, predicted: usize) -> u64 {
        self.counts[gold * self.labels.len() + predicted]
    }

    pub fn row_sum(&self, gold: usize) -> u64 {
        let n = self.labels.len();
        self.counts[gold * n..(gold + 1) * n].iter().sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        let n = self.labels.len();
        (0..n).map(|g| self.counts[g * n + predicted]).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The minor over `subset` in subset order. Cell values are copied, not
    /// re-normalized. Also returns how many predictions from subset gold
    /// rows fell outside the subset and were therefore excluded.
    pub fn subset(&self, subset: &[String]) -> Result<(ConfusionMatrix, u64)> {
        let rows: Vec<usize> =
            subset.iter().map(|l| self.index_of(l)).collect::<Result<_>>()?;
        let mut minor = ConfusionMatrix::new(subset.to_vec())?;
        let k = subset.len();
        let mut excluded = 0;
        for (i, &g) in rows.iter().enumerate() {
            let mut in_subset = 0;
            for (j, &p) in rows.iter().enumerate() {
                let c = self.count(g, p);
                minor.counts[i * k + j] = c;
                in_subset += c;
            }
            excluded += self.row_sum(g) - in_subset;
        }
        Ok((minor, excluded))
    }

    /// TSV with a header row and column of labels.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "gold\\pred")?;
        for label in &self.labels {
            write!(out, "\t{label}")?;
        }
        writeln!(out)?;
        for (g, label) in self.labels.iter().enumerate() {
            write!(out, "{label}")?;
            for p in 0..self.labels.len() {
                write!(out, "\t{}", self.count(g, p))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

impl Serialize for ConfusionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.labels.len();
        let rows: Vec<&[u64]> = (0..n).map(|g| &self.counts[g * n..(g + 1) * n]).collect();
        let mut s = serializer.serialize_struct("ConfusionMatrix", 2)?;
        s.serialize_field("labels", &self.labels)?;
        s.serialize_field("counts", &rows)?;
        s.end()
    }
}

/// One-vs-rest counts and rates for a single class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub label: String,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fpr: f64,
}

impl ClassMetrics {
    fn from_counts(label: String, tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let fpr = ratio(fp, fp + tn);
        Self { label, tp, fp, fn_, tn, precision, recall, f1, fpr }
    }

    /// Classes with no gold and no predicted instances stay out of the
    /// macro averages.
    pub fn participates(&self) -> bool {
        self.tp + self.fp + self.fn_ > 0
    }
}

/// Full evaluation result for one (gold, predictions) pairing.
#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub n_lines: u64,
    pub macro_f1: f64,
    pub macro_fpr: f64,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    /// Derives all per-class metrics and macro averages from a confusion
    /// matrix. True negatives count within the matrix's label universe.
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        let total = confusion.total();
        let mut per_class = Vec::with_capacity(confusion.labels().len());
        for (i, label) in confusion.labels().iter().enumerate() {
            let tp = confusion.count(i, i);
            let fn_ = confusion.row_sum(i) - tp;
            let fp = confusion.col_sum(i) - tp;
            let tn = total - tp - fp - fn_;
            per_class.push(ClassMetrics::from_counts(label.clone(), tp, fp, fn_, tn));
        }
        let included: Vec<&ClassMetrics> =
            per_class.iter().filter(|m| m.participates()).collect();
        let k = included.len().max(1) as f64;
        let macro_f1 = included.iter().map(|m| m.f1).sum::<f64>() / k;
        let macro_fpr = included.iter().map(|m| m.fpr).sum::<f64>() / k;
        Self { n_lines: total, macro_f1, macro_fpr, per_class, confusion }
    }

    /// Aligned-column text rendering.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        let width = self.per_class.iter().map(|m| m.label.len()).max().unwrap_or(5).max(5);
        writeln!(
            out,
            "{:<width$}  {:>8} {:>8} {:>8} {:>8}  {:>9} {:>9} {:>9} {:>9}",
            "label", "tp", "fp", "fn", "tn", "precision", "recall", "f1", "fpr"
        )?;
        for m in &self.per_class {
            writeln!(
                out,
                "{:<width$}  {:>8} {:>8} {:>8} {:>8}  {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                m.label, m.tp, m.fp, m.fn_, m.tn, m.precision, m.recall, m.f1, m.fpr
            )?;
        }
        writeln!(out)?;
        writeln!(out, "lines: {}", self.n_lines)?;
        writeln!(out, "macro F1:  {:.4}", self.macro_f1)?;
        writeln!(out, "macro FPR: {:.4}", self.macro_fpr)?;
        Ok(())
    }
}

/// Scores aligned gold and predicted labels over the union of both label
/// sets.
pub fn evaluate(gold: &[String], predictions: &[String]) -> Result<EvalReport> {
    if gold.is_empty() && predictions.is_empty() {
        return Err(LidError::EmptyCorpus);
    }
    Ok(EvalReport::from_confusion(ConfusionMatrix::from_pairs(gold, predictions, None)?))
}

/// Like [`evaluate`] but with an explicitly supplied label universe; labels
/// outside it are an error.
pub fn evaluate_with_universe(
    gold: &[String],
    predictions: &[String],
    universe: &[String],
) -> Result<EvalReport> {
    Ok(EvalReport::from_confusion(ConfusionMatrix::from_pairs(
        gold,
        predictions,
        Some(universe),
    )?))
}
