//! SGD training loop with optional unsynchronized multi-threading.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::LabeledLine;
use crate::error::{LidError, Result};
use crate::features::{FeatureId, Vocabulary};
use crate::label::LanguageLabel;
use crate::model::{Hyperparams, Matrix, Model};

/// Summary statistics from one training run.
#[derive(Clone, Debug)]
pub struct TrainReport {
    /// Mean `-log p(gold)` measured before each update, per epoch.
    pub epoch_loss: Vec<f64>,
    pub examples: u64,
    pub wall_seconds: f64,
    pub lines_per_sec: f64,
}

/// Linear decay: the step at progress `t` of `total` uses
/// `lr0 * (1 - t / total)`. The first step sees `lr0` exactly and every
/// step stays non-negative.
pub fn learning_rate(lr0: f64, step: u64, total: u64) -> f64 {
    lr0 * (1.0 - step as f64 / total as f64)
}

/// Unsynchronized view over a row-major f32 matrix. When training runs with
/// more than one thread, concurrent updates may interleave and lose writes;
/// results are then only statistically equivalent across runs. With one
/// thread the access is exclusive and the run is bit-reproducible.
#[derive(Clone, Copy)]
struct RawMatrix {
    ptr: *mut f32,
    cols: usize,
}

unsafe impl Send for RawMatrix {}
unsafe impl Sync for RawMatrix {}

impl RawMatrix {
    fn of(matrix: &mut Matrix) -> Self {
        Self { ptr: matrix.data_mut().as_mut_ptr(), cols: matrix.cols() }
    }

    #[inline]
    unsafe fn get(&self, row: usize, col: usize) -> f32 {
        self.ptr.add(row * self.cols + col).read()
    }

    #[inline]
    unsafe fn sub(&self, row: usize, col: usize, delta: f32) {
        let p = self.ptr.add(row * self.cols + col);
        p.write(p.read() - delta);
    }
}

struct Scratch {
    hidden: Vec<f64>,
    probs: Vec<f64>,
    grad_hidden: Vec<f64>,
}

impl Scratch {
    fn new(dim: usize, n_labels: usize) -> Self {
        Self {
            hidden: vec![0.0; dim],
            probs: Vec::with_capacity(n_labels),
            grad_hidden: vec![0.0; dim],
        }
    }
}

/// One cross-entropy SGD step; returns the pre-update loss.
///
/// The hidden gradient is taken against the output weights as they were at
/// the start of the step. Embedding rows are updated once per feature
/// occurrence, which scales multiplicities the same way the forward mean
/// does.
unsafe fn sgd_step(
    input: RawMatrix,
    output: RawMatrix,
    ids: &[FeatureId],
    gold: usize,
    n_labels: usize,
    lr: f64,
    scratch: &mut Scratch,
) -> f64 {
    let dim = input.cols;
    scratch.hidden.fill(0.0);
    for &id in ids {
        for d in 0..dim {
            scratch.hidden[d] += f64::from(input.get(id as usize, d));
        }
    }
    let inv = 1.0 / ids.len() as f64;
    for h in &mut scratch.hidden {
        *h *= inv;
    }

    scratch.probs.clear();
    for l in 0..n_labels {
        let mut z = 0.0f64;
        for d in 0..dim {
            z += f64::from(output.get(l, d)) * scratch.hidden[d];
        }
        scratch.probs.push(z);
    }
    softmax_in_place(&mut scratch.probs);
    let loss = -scratch.probs[gold].ln();

    scratch.grad_hidden.fill(0.0);
    for l in 0..n_labels {
        let g = scratch.probs[l] - if l == gold { 1.0 } else { 0.0 };
        let step = lr * g;
        for d in 0..dim {
            scratch.grad_hidden[d] += g * f64::from(output.get(l, d));
            output.sub(l, d, (step * scratch.hidden[d]) as f32);
        }
    }
    let scale = lr * inv;
    for &id in ids {
        for d in 0..dim {
            input.sub(id as usize, d, (scale * scratch.grad_hidden[d]) as f32);
        }
    }
    loss
}

fn softmax_in_place(logits: &mut [f64]) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for z in logits.iter_mut() {
        *z = (*z - max).exp();
        sum += *z;
    }
    for z in logits.iter_mut() {
        *z /= sum;
    }
}

/// Trains a classifier on a labeled corpus.
///
/// Builds the vocabulary, initializes embeddings uniformly in
/// `[-1/dim, 1/dim]` and the output layer to zero, then runs
/// `epochs * corpus.len()` SGD steps with linearly decaying learning rate.
/// The example order is reshuffled every epoch from the seeded RNG.
pub fn train(corpus: &[LabeledLine], hp: &Hyperparams) -> Result<(Model, TrainReport)> {
    hp.validate()?;
    if corpus.is_empty() {
        return Err(LidError::EmptyCorpus);
    }
    let label_set: BTreeSet<LanguageLabel> = corpus.iter().map(|line| line.label).collect();
    if label_set.len() < 2 {
        return Err(LidError::SingleLabel);
    }
    let labels: Vec<LanguageLabel> = label_set.into_iter().collect();
    let label_index: HashMap<LanguageLabel, u32> =
        labels.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
    let gold: Vec<u32> = corpus.iter().map(|line| label_index[&line.label]).collect();

    let vocab =
        Vocabulary::build(corpus, hp.min_count, hp.bucket_size, hp.ngram_min, hp.ngram_max)?;

    let dim = hp.dim as usize;
    let n_labels = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let bound = 1.0f32 / hp.dim as f32;
    let mut input = Matrix::zeros(vocab.feature_space() as usize, dim);
    for v in input.data_mut() {
        *v = rng.random_range(-bound..bound);
    }
    let mut output = Matrix::zeros(n_labels, dim);

    let n = corpus.len();
    let total_steps = u64::from(hp.epochs) * n as u64;
    let threads = (hp.threads as usize).min(n).max(1);
    let chunk_size = n.div_ceil(threads);
    let progress = AtomicU64::new(0);
    let input_raw = RawMatrix::of(&mut input);
    let output_raw = RawMatrix::of(&mut output);

    let start = Instant::now();
    let mut epoch_loss = Vec::with_capacity(hp.epochs as usize);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        let loss_sum: f64 = std::thread::scope(|scope| {
            let handles: Vec<_> = order
                .chunks(chunk_size)
                .map(|chunk| {
                    let vocab = &vocab;
                    let gold = &gold;
                    let progress = &progress;
                    scope.spawn(move || {
                        let mut scratch = Scratch::new(dim, n_labels);
                        let mut sum = 0.0f64;
                        for &i in chunk {
                            let t = progress.fetch_add(1, Ordering::Relaxed);
                            let lr = learning_rate(hp.lr0, t, total_steps);
                            let ids = vocab.featurize(&corpus[i].text);
                            sum += unsafe {
                                sgd_step(
                                    input_raw,
                                    output_raw,
                                    &ids,
                                    gold[i] as usize,
                                    n_labels,
                                    lr,
                                    &mut scratch,
                                )
                            };
                        }
                        sum
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("training thread panicked")).sum()
        });
        epoch_loss.push(loss_sum / n as f64);
    }

    let wall_seconds = start.elapsed().as_secs_f64();
    if !input.is_finite() || !output.is_finite() {
        return Err(LidError::NonFiniteModel);
    }
    let report = TrainReport {
        epoch_loss,
        examples: total_steps,
        wall_seconds,
        lines_per_sec: if wall_seconds > 0.0 { total_steps as f64 / wall_seconds } else { 0.0 },
    };
    let model = Model::from_parts(vocab, labels, hp.clone(), input, output)?;
    Ok((model, report))
}
