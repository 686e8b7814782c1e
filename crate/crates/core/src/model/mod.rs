//! The classifier: averaged feature embeddings into a linear softmax layer.

mod format;
mod train;

pub use format::{load, save, FORMAT_VERSION, MAGIC};
pub use train::{train, TrainReport};

use std::collections::HashMap;

use crate::error::{LidError, Result};
use crate::features::{FeatureId, Vocabulary};
use crate::label::LanguageLabel;

/// Seed used when the caller does not pass one. Never wall-clock.
pub const DEFAULT_SEED: u64 = 42;

/// The only supported loss.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Loss {
    #[default]
    Softmax,
}

/// Training hyperparameters. The defaults are the reference configuration
/// this toolkit reproduces: softmax loss, 2 epochs, lr 0.8, 256 dimensions,
/// min word count 1000, character n-grams 2-5, word n-grams 1, and a bucket
/// of 1,000,000; the sampling temperature default is 0.3.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperparams {
    pub loss: Loss,
    pub epochs: u32,
    pub lr0: f64,
    pub dim: u32,
    pub min_count: u64,
    pub ngram_min: u32,
    pub ngram_max: u32,
    pub word_ngrams: u32,
    pub bucket_size: u32,
    pub threads: u32,
    pub seed: u64,
    pub sample_alpha: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            loss: Loss::Softmax,
            epochs: 2,
            lr0: 0.8,
            dim: 256,
            min_count: 1000,
            ngram_min: 2,
            ngram_max: 5,
            word_ngrams: 1,
            bucket_size: 1_000_000,
            threads: 1,
            seed: DEFAULT_SEED,
            sample_alpha: 0.3,
        }
    }
}

impl Hyperparams {
    /// `lr0 == 0` is tolerated here so a zero-step run can serve as a
    /// diagnostic; the CLI enforces strict positivity.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(LidError::InvalidParameter(msg.to_string()));
        if self.epochs < 1 {
            return fail("epochs must be at least 1");
        }
        if !(self.lr0 >= 0.0) || !self.lr0.is_finite() {
            return fail("learning rate must be finite and non-negative");
        }
        if self.dim < 1 {
            return fail("dim must be at least 1");
        }
        if self.min_count < 1 {
            return fail("min_count must be at least 1");
        }
        if self.ngram_min < 1 || self.ngram_min > self.ngram_max {
            return fail("need 1 <= minn <= maxn");
        }
        if self.word_ngrams != 1 {
            return fail("word n-grams other than 1 are not supported");
        }
        if self.bucket_size < 1 {
            return fail("bucket size must be at least 1");
        }
        if self.threads < 1 {
            return fail("threads must be at least 1");
        }
        if !(self.sample_alpha > 0.0) {
            return fail("sampling alpha must be positive");
        }
        Ok(())
    }
}

/// Dense row-major f32 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LidError::MalformedModel(format!(
                "matrix payload holds {} values, expected {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// One ranked prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub label: LanguageLabel,
    pub probability: f64,
}

/// Loss and gradients for a single example; what one SGD step applies.
///
/// `output` is the `L x dim` gradient of the loss w.r.t. the output layer.
/// The gradient w.r.t. an embedding row touched with multiplicity `m` is
/// `m / |F|` times `hidden`.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub loss: f64,
    pub output: Vec<f64>,
    pub hidden: Vec<f64>,
}

/// A trained classifier: embedding table, output layer, and label list.
#[derive(Clone, Debug)]
pub struct Model {
    vocab: Vocabulary,
    labels: Vec<LanguageLabel>,
    label_index: HashMap<LanguageLabel, u32>,
    hp: Hyperparams,
    input: Matrix,
    output: Matrix,
}

impl Model {
    pub fn from_parts(
        vocab: Vocabulary,
        labels: Vec<LanguageLabel>,
        hp: Hyperparams,
        input: Matrix,
        output: Matrix,
    ) -> Result<Self> {
        if labels.len() < 2 {
            return Err(LidError::SingleLabel);
        }
        let mut label_index = HashMap::with_capacity(labels.len());
        for (i, &label) in labels.iter().enumerate() {
            if label_index.insert(label, i as u32).is_some() {
                return Err(LidError::MalformedModel(format!("duplicate label {label}")));
            }
        }
        let dim = hp.dim as usize;
        if input.rows() != vocab.feature_space() as usize || input.cols() != dim {
            return Err(LidError::MalformedModel(format!(
                "input matrix is {}x{}, expected {}x{dim}",
                input.rows(),
                input.cols(),
                vocab.feature_space()
            )));
        }
        if output.rows() != labels.len() || output.cols() != dim {
            return Err(LidError::MalformedModel(format!(
                "output matrix is {}x{}, expected {}x{dim}",
                output.rows(),
                output.cols(),
                labels.len()
            )));
        }
        Ok(Self { vocab, labels, label_index, hp, input, output })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn labels(&self) -> &[LanguageLabel] {
        &self.labels
    }

    pub fn label_index(&self, label: &LanguageLabel) -> Option<u32> {
        self.label_index.get(label).copied()
    }

    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hp
    }

    pub fn input_embeddings(&self) -> &Matrix {
        &self.input
    }

    pub fn output_weights(&self) -> &Matrix {
        &self.output
    }

    /// `(W + B) * dim + L * dim`.
    pub fn parameter_count(&self) -> u64 {
        (self.input.rows() as u64 + self.output.rows() as u64) * self.hp.dim as u64
    }

    /// Mean of the embedding rows selected by `ids`, multiplicity included.
    /// Accumulates in f64.
    pub(crate) fn hidden(&self, ids: &[FeatureId]) -> Result<Vec<f64>> {
        if ids.is_empty() {
            return Err(LidError::EmptyFeatures);
        }
        let dim = self.hp.dim as usize;
        let mut h = vec![0.0f64; dim];
        for &id in ids {
            let row = self.input.row(id as usize);
            for (acc, &v) in h.iter_mut().zip(row) {
                *acc += f64::from(v);
            }
        }
        let inv = 1.0 / ids.len() as f64;
        for acc in &mut h {
            *acc *= inv;
        }
        Ok(h)
    }

    fn logits(&self, hidden: &[f64]) -> Vec<f64> {
        (0..self.labels.len())
            .map(|l| {
                self.output
                    .row(l)
                    .iter()
                    .zip(hidden)
                    .map(|(&w, &h)| f64::from(w) * h)
                    .sum()
            })
            .collect()
    }

    /// Probability vector over the label list for a feature multiset.
    pub fn forward_ids(&self, ids: &[FeatureId]) -> Result<Vec<f64>> {
        let hidden = self.hidden(ids)?;
        Ok(softmax(&self.logits(&hidden)))
    }

    /// Probability vector for a line of text. Infallible: even empty text
    /// featurizes to the sentinel.
    pub fn forward(&self, text: &str) -> Vec<f64> {
        self.forward_ids(&self.vocab.featurize(text)).expect("sentinel feature always present")
    }

    /// Top-`k` labels with probability at least `threshold`, by descending
    /// probability; ties broken by label order.
    pub fn predict_topk(&self, text: &str, k: usize, threshold: f64) -> Vec<Prediction> {
        let probs = self.forward(text);
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).unwrap().then(a.cmp(&b)));
        order
            .into_iter()
            .filter(|&i| probs[i] >= threshold)
            .take(k)
            .map(|i| Prediction { label: self.labels[i], probability: probs[i] })
            .collect()
    }

    /// Softmax cross-entropy of one labeled line: `-log p(label)`.
    pub fn loss(&self, text: &str, label: &LanguageLabel) -> Result<f64> {
        let gold = self
            .label_index(label)
            .ok_or_else(|| LidError::UnknownModelLabel(label.to_string()))?;
        let probs = self.forward(text);
        Ok(-probs[gold as usize].ln())
    }

    /// Loss plus the gradients an SGD step would apply. With
    /// `g = p - onehot(gold)`: the output-layer gradient is the outer
    /// product `g hᵀ` and the hidden gradient is `output_weightsᵀ g`.
    pub fn gradients(&self, ids: &[FeatureId], gold: u32) -> Result<Gradients> {
        let dim = self.hp.dim as usize;
        let n_labels = self.labels.len();
        if gold as usize >= n_labels {
            return Err(LidError::UnknownModelLabel(format!("label index {gold}")));
        }
        let h = self.hidden(ids)?;
        let probs = softmax(&self.logits(&h));
        let loss = -probs[gold as usize].ln();

        let mut output = vec![0.0f64; n_labels * dim];
        let mut hidden = vec![0.0f64; dim];
        for l in 0..n_labels {
            let g = probs[l] - if l == gold as usize { 1.0 } else { 0.0 };
            let out_row = self.output.row(l);
            for d in 0..dim {
                output[l * dim + d] = g * h[d];
                hidden[d] += g * f64::from(out_row[d]);
            }
        }
        Ok(Gradients { loss, output, hidden })
    }
}

/// Numerically stable softmax computed in f64.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
