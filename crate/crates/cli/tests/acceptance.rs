//! Acceptance suite. One test per criterion; each prints a single
//! `acceptance: <name> ... PASS/FAIL` line (visible with `--nocapture`).
//!
//!   cargo test -p lid-cli --test acceptance -- --nocapture

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{lid, synthetic_corpus, train_test_split, write_texts};
use lid_core::corpus::{self, corpus_stats, temperature_sample, LabeledLine};
use lid_core::eval::{evaluate, pearson};
use lid_core::features::Vocabulary;
use lid_core::label::LanguageLabel;
use lid_core::model::{self, Hyperparams, Matrix, Model};
use lid_core::LidError;

fn verdict(name: &str, pass: bool, detail: &str) {
    let state = if pass { "PASS" } else { "FAIL" };
    println!("acceptance: {name} ... {state} ({detail})");
    assert!(pass, "{name} failed: {detail}");
}

// ---------------------------------------------------------------------
// Synthetic end-to-end: 10 languages over disjoint Unicode blocks,
// 2000 train + 200 test lines each; dim 16, bucket 10000, epochs 2,
// lr 0.8, threads 1. Requires macro F1 >= 0.95, macro FPR <= 0.01,
// wall time < 60 s.
// ---------------------------------------------------------------------
#[test]
fn synthetic_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(2200, 20);
    let (train, test) = train_test_split(&corpus, 2200, 200);
    assert_eq!(train.len(), 20_000);
    assert_eq!(test.len(), 2_000);

    let train_path = dir.path().join("train.txt");
    corpus::write_labeled_file(&train_path, &train).unwrap();
    let texts_path = dir.path().join("texts.txt");
    write_texts(&texts_path, &test);
    let gold_path = dir.path().join("gold.txt");
    corpus::write_labeled_file(&gold_path, &test).unwrap();
    let model_path = dir.path().join("model.bin");
    let pred_path = dir.path().join("pred.txt");
    let report_path = dir.path().join("report.json");

    let start = Instant::now();
    assert!(lid()
        .args(["train", "--dim", "16", "--bucket", "10000", "--epochs", "2"])
        .args(["--lr", "0.8", "--threads", "1", "--input"])
        .arg(&train_path)
        .arg("--output")
        .arg(&model_path)
        .status()
        .unwrap()
        .success());
    assert!(lid()
        .args(["predict", "--threads", "1", "--model"])
        .arg(&model_path)
        .arg("--input")
        .arg(&texts_path)
        .arg("--output")
        .arg(&pred_path)
        .status()
        .unwrap()
        .success());
    assert!(lid()
        .args(["eval", "--gold"])
        .arg(&gold_path)
        .arg("--predictions")
        .arg(&pred_path)
        .arg("--output")
        .arg(&report_path)
        .status()
        .unwrap()
        .success());
    let wall = start.elapsed().as_secs_f64();

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let f1 = json["macro_f1"].as_f64().unwrap();
    let fpr = json["macro_fpr"].as_f64().unwrap();
    verdict(
        "synthetic end-to-end",
        f1 >= 0.95 && fpr <= 0.01 && wall < 60.0,
        &format!("macro F1 {f1:.4}, macro FPR {fpr:.4}, wall {wall:.1}s"),
    );
}

// ---------------------------------------------------------------------
// Gradient check: random model with dim 8, 4 labels, 20-feature examples;
// analytic gradients of every output weight and every touched embedding
// entry against central differences (eps 1e-4), relative error < 1e-4,
// 100 random examples.
// ---------------------------------------------------------------------

/// Independent f64 re-implementation of the forward pass and loss.
struct Mirror {
    input: Vec<f64>,
    output: Vec<f64>,
    dim: usize,
    n_labels: usize,
}

impl Mirror {
    fn of(model: &Model) -> Self {
        Self {
            input: model.input_embeddings().data().iter().map(|&v| f64::from(v)).collect(),
            output: model.output_weights().data().iter().map(|&v| f64::from(v)).collect(),
            dim: model.hyperparams().dim as usize,
            n_labels: model.labels().len(),
        }
    }

    fn loss(&self, ids: &[u32], gold: usize) -> f64 {
        let mut hidden = vec![0.0; self.dim];
        for &id in ids {
            for d in 0..self.dim {
                hidden[d] += self.input[id as usize * self.dim + d];
            }
        }
        for h in &mut hidden {
            *h /= ids.len() as f64;
        }
        let logits: Vec<f64> = (0..self.n_labels)
            .map(|l| (0..self.dim).map(|d| self.output[l * self.dim + d] * hidden[d]).sum())
            .collect();
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_z = max + logits.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
        log_z - logits[gold]
    }
}

#[test]
fn gradient_check() {
    const EPS: f64 = 1e-4;
    const TOLERANCE: f64 = 1e-4;
    // entries below this are compared at absolute scale, because the
    // finite difference itself carries ~1e-9 truncation error
    const FLOOR: f64 = 1e-4;
    let rel_err = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(FLOOR);

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let labels: Vec<LanguageLabel> = ["aaa_Latn", "bbb_Cyrl", "ccc_Grek", "ddd_Hebr"]
        .iter()
        .map(|c| LanguageLabel::parse(c).unwrap())
        .collect();
    let seed_line = LabeledLine { text: "alpha beta gamma".into(), label: labels[0] };
    let vocab = Vocabulary::build(std::slice::from_ref(&seed_line), 1, 60, 2, 5).unwrap();
    let dim = 8usize;
    let rows = vocab.feature_space() as usize;
    let mut fill =
        |n: usize| (0..n).map(|_| rng.random_range(-0.5f32..0.5f32)).collect::<Vec<f32>>();
    let input = Matrix::from_vec(rows, dim, fill(rows * dim)).unwrap();
    let output = Matrix::from_vec(4, dim, fill(4 * dim)).unwrap();
    let hp = Hyperparams { dim: dim as u32, bucket_size: 60, min_count: 1, ..Default::default() };
    let model = Model::from_parts(vocab, labels, hp, input, output).unwrap();

    let space = model.vocab().feature_space();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let ids: Vec<u32> = (0..20).map(|_| rng.random_range(0..space)).collect();
        let gold = rng.random_range(0..4usize);
        let grads = model.gradients(&ids, gold as u32).unwrap();

        for l in 0..4 {
            for d in 0..dim {
                let mut plus = Mirror::of(&model);
                plus.output[l * dim + d] += EPS;
                let mut minus = Mirror::of(&model);
                minus.output[l * dim + d] -= EPS;
                let fd = (plus.loss(&ids, gold) - minus.loss(&ids, gold)) / (2.0 * EPS);
                worst = worst.max(rel_err(grads.output[l * dim + d], fd));
            }
        }
        let mut unique = ids.clone();
        unique.sort_unstable();
        unique.dedup();
        for &row in &unique {
            let mult = ids.iter().filter(|&&i| i == row).count() as f64;
            for d in 0..dim {
                let analytic = mult / ids.len() as f64 * grads.hidden[d];
                let mut plus = Mirror::of(&model);
                plus.input[row as usize * dim + d] += EPS;
                let mut minus = Mirror::of(&model);
                minus.input[row as usize * dim + d] -= EPS;
                let fd = (plus.loss(&ids, gold) - minus.loss(&ids, gold)) / (2.0 * EPS);
                worst = worst.max(rel_err(analytic, fd));
            }
        }
    }
    verdict(
        "gradient check",
        worst < TOLERANCE,
        &format!("worst relative error {worst:.3e} over 100 examples"),
    );
}

// ---------------------------------------------------------------------
// Metric oracle equivalence: per-class tp/fp/fn/tn, F1, FPR, and macro
// averages from `evaluate` match a brute-force pair-scanning oracle
// exactly on 100 random sets; the hand-derived all-A case reproduces
// macro F1 = 1/3 and macro FPR = 0.5 exactly.
// ---------------------------------------------------------------------

struct OracleClass {
    label: String,
    tp: u64,
    fp: u64,
    fn_: u64,
    tn: u64,
    precision: f64,
    recall: f64,
    f1: f64,
    fpr: f64,
}

fn oracle_evaluate(gold: &[String], pred: &[String]) -> (Vec<OracleClass>, f64, f64) {
    let mut labels: Vec<String> = gold.iter().chain(pred).cloned().collect();
    labels.sort();
    labels.dedup();
    let ratio = |n: u64, d: u64| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    let per_class: Vec<OracleClass> = labels
        .iter()
        .map(|label| {
            let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
            for (g, p) in gold.iter().zip(pred) {
                match (g == label, p == label) {
                    (true, true) => tp += 1,
                    (false, true) => fp += 1,
                    (true, false) => fn_ += 1,
                    (false, false) => tn += 1,
                }
            }
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            let fpr = ratio(fp, fp + tn);
            OracleClass { label: label.clone(), tp, fp, fn_, tn, precision, recall, f1, fpr }
        })
        .collect();
    let included: Vec<&OracleClass> =
        per_class.iter().filter(|c| c.tp + c.fp + c.fn_ > 0).collect();
    let k = included.len().max(1) as f64;
    let macro_f1 = included.iter().map(|c| c.f1).sum::<f64>() / k;
    let macro_fpr = included.iter().map(|c| c.fpr).sum::<f64>() / k;
    (per_class, macro_f1, macro_fpr)
}

#[test]
fn metric_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E7A);
    let names: Vec<String> = (0..20).map(|i| format!("L{i:02}")).collect();
    for case in 0..100 {
        let n_labels = rng.random_range(5..=20usize);
        let mut gold = Vec::with_capacity(1000);
        let mut pred = Vec::with_capacity(1000);
        for _ in 0..1000 {
            let g = rng.random_range(0..n_labels);
            gold.push(names[g].clone());
            let p = if rng.random_range(0.0..1.0) < 0.7 {
                g
            } else {
                rng.random_range(0..n_labels)
            };
            pred.push(names[p].clone());
        }
        let report = evaluate(&gold, &pred).unwrap();
        let (oracle, macro_f1, macro_fpr) = oracle_evaluate(&gold, &pred);

        assert_eq!(report.per_class.len(), oracle.len(), "case {case}");
        for (ours, theirs) in report.per_class.iter().zip(&oracle) {
            assert_eq!(ours.label, theirs.label);
            assert_eq!(
                (ours.tp, ours.fp, ours.fn_, ours.tn),
                (theirs.tp, theirs.fp, theirs.fn_, theirs.tn),
                "case {case}, label {}",
                ours.label
            );
            assert_eq!(ours.precision, theirs.precision);
            assert_eq!(ours.recall, theirs.recall);
            assert_eq!(ours.f1, theirs.f1);
            assert_eq!(ours.fpr, theirs.fpr);
        }
        assert_eq!(report.macro_f1, macro_f1, "case {case}");
        assert_eq!(report.macro_fpr, macro_fpr, "case {case}");
    }

    // hand-derived degenerate case
    let mut gold = vec!["A".to_string(); 100];
    gold.extend(vec!["B".to_string(); 100]);
    let pred = vec!["A".to_string(); 200];
    let report = evaluate(&gold, &pred).unwrap();
    let exact = report.macro_f1 == 1.0 / 3.0 && report.macro_fpr == 0.5;
    verdict(
        "metric oracle equivalence",
        exact,
        &format!(
            "100 random sets exact; degenerate macro F1 {} macro FPR {}",
            report.macro_f1, report.macro_fpr
        ),
    );
}

// ---------------------------------------------------------------------
// Sampling distribution: alpha 0.3 on a (0.9, 0.1) corpus with
// target 1000 yields exactly (659, 341); 20 random skewed corpora match
// an independent largest-remainder oracle exactly; alpha 1 reproduces
// input proportions within rounding.
// ---------------------------------------------------------------------

fn oracle_quotas(counts: &[u64], alpha: f64, total: u64) -> Vec<u64> {
    let n: u64 = counts.iter().sum();
    let weights: Vec<f64> = counts.iter().map(|&c| (c as f64 / n as f64).powf(alpha)).collect();
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut quotas: Vec<u64> = exact.iter().map(|e| e.floor() as u64).collect();
    let mut rest: Vec<usize> = (0..counts.len()).collect();
    rest.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    let missing = total - quotas.iter().sum::<u64>();
    for &i in rest.iter().take(missing as usize) {
        quotas[i] += 1;
    }
    quotas
}

fn corpus_with_counts(counts: &[u64]) -> Vec<LabeledLine> {
    let codes = [
        "zaa_Latn", "zab_Latn", "zac_Latn", "zad_Latn", "zae_Latn", "zaf_Latn", "zag_Latn",
        "zah_Latn", "zai_Latn", "zaj_Latn",
    ];
    let mut corpus = Vec::new();
    for (i, &n) in counts.iter().enumerate() {
        let label = LanguageLabel::parse(codes[i]).unwrap();
        for k in 0..n {
            corpus.push(LabeledLine { text: format!("line {k}"), label });
        }
    }
    corpus
}

fn sampled_counts(corpus: &[LabeledLine], alpha: f64, seed: u64, total: u64) -> Vec<u64> {
    let sampled = temperature_sample(corpus, alpha, seed, total).unwrap();
    let stats = corpus_stats(&sampled);
    // labels sorted; missing labels count zero
    let all: BTreeMap<LanguageLabel, u64> = corpus_stats(corpus)
        .per_label_lines
        .keys()
        .map(|&l| (l, *stats.per_label_lines.get(&l).unwrap_or(&0)))
        .collect();
    all.into_values().collect()
}

#[test]
fn sampling_distribution() {
    // frozen oracle value, computed with 60-digit arithmetic:
    // quotas 659.073..., 340.926... -> (659, 341)
    let two = corpus_with_counts(&[900, 100]);
    let counts = sampled_counts(&two, 0.3, 13, 1000);
    assert_eq!(counts, vec![659, 341], "the (0.9, 0.1) paper-alpha case");

    let mut rng = ChaCha8Rng::seed_from_u64(0x5A3);
    for case in 0..20 {
        let n_labels = rng.random_range(2..=10usize);
        let input: Vec<u64> = (0..n_labels)
            .map(|_| {
                let base = rng.random_range(1..=40u64);
                let scale = 10u64.pow(rng.random_range(0..=2));
                base * scale
            })
            .collect();
        let total = rng.random_range(n_labels as u64 * 8..=3000);
        let corpus = corpus_with_counts(&input);
        let expected = oracle_quotas(&input, 0.3, total);
        let actual = sampled_counts(&corpus, 0.3, case as u64, total);
        assert_eq!(actual, expected, "case {case}: input {input:?}, total {total}");

        // the same corpus at identity temperature keeps the input
        // proportions within rounding
        let identity = sampled_counts(&corpus, 1.0, case as u64, total);
        let n: u64 = input.iter().sum();
        for (a, &c) in identity.iter().zip(&input) {
            let exact = total as f64 * c as f64 / n as f64;
            assert!(
                (*a as f64 - exact).abs() < 1.0,
                "case {case}: alpha=1 count {a} vs exact {exact}"
            );
        }
    }
    verdict(
        "sampling distribution",
        true,
        "(659, 341) exact; 20 random corpora match the quota oracle; alpha=1 within rounding",
    );
}

// ---------------------------------------------------------------------
// Determinism: identical seed and threads=1 give bit-identical model
// files from cmd_train, and byte-identical cmd_predict outputs.
// ---------------------------------------------------------------------
#[test]
fn determinism() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(150, 7);
    let train_path = dir.path().join("train.txt");
    corpus::write_labeled_file(&train_path, &corpus).unwrap();
    let texts_path = dir.path().join("texts.txt");
    write_texts(&texts_path, &synthetic_corpus(30, 8));

    let mut model_bytes = Vec::new();
    let mut predict_bytes = Vec::new();
    for run in 0..2 {
        let model_path = dir.path().join(format!("model{run}.bin"));
        assert!(lid()
            .args(["train", "--dim", "16", "--bucket", "4000", "--min-count", "5"])
            .args(["--threads", "1", "--seed", "29", "--input"])
            .arg(&train_path)
            .arg("--output")
            .arg(&model_path)
            .status()
            .unwrap()
            .success());
        model_bytes.push(fs::read(&model_path).unwrap());

        let pred_path = dir.path().join(format!("pred{run}.txt"));
        assert!(lid()
            .args(["predict", "-k", "3", "--model"])
            .arg(&model_path)
            .arg("--input")
            .arg(&texts_path)
            .arg("--output")
            .arg(&pred_path)
            .status()
            .unwrap()
            .success());
        predict_bytes.push(fs::read(&pred_path).unwrap());
    }
    let models_equal = model_bytes[0] == model_bytes[1];
    let predictions_equal = predict_bytes[0] == predict_bytes[1];
    verdict(
        "determinism",
        models_equal && predictions_equal,
        &format!(
            "model files identical: {models_equal}; prediction files identical: {predictions_equal}"
        ),
    );
}

// ---------------------------------------------------------------------
// Serialization: save -> load preserves top-k predictions on 1000 lines
// exactly; corrupted and version-bumped files are rejected.
// ---------------------------------------------------------------------
#[test]
fn serialization() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(100, 31);
    let hp = Hyperparams {
        dim: 8,
        bucket_size: 2000,
        min_count: 5,
        seed: 9,
        ..Default::default()
    };
    let (trained, _) = model::train(&corpus, &hp).unwrap();
    let path = dir.path().join("model.bin");
    model::save(&trained, &path).unwrap();
    let loaded = model::load(&path).unwrap();

    let texts: Vec<String> =
        synthetic_corpus(100, 77).iter().map(|l| l.text.clone()).collect();
    assert_eq!(texts.len(), 1000);
    let preserved = texts
        .iter()
        .all(|t| trained.predict_topk(t, 3, 0.0) == loaded.predict_topk(t, 3, 0.0));

    let original = fs::read(&path).unwrap();
    let mut corrupted = original.clone();
    let mid = corrupted.len() / 2;
    corrupted[mid] ^= 0x55;
    fs::write(&path, &corrupted).unwrap();
    let corrupt_rejected = matches!(model::load(&path), Err(LidError::ChecksumMismatch));

    fs::write(&path, &original[..original.len() - 7]).unwrap();
    let truncation_rejected = matches!(model::load(&path), Err(LidError::ChecksumMismatch));

    let mut bumped = original.clone();
    bumped[4] = 9;
    fs::write(&path, &bumped).unwrap();
    let version_rejected = matches!(model::load(&path), Err(LidError::VersionMismatch(9)));

    verdict(
        "serialization",
        preserved && corrupt_rejected && truncation_rejected && version_rejected,
        &format!(
            "top-k preserved on 1000 lines: {preserved}; corrupt/truncated/bumped rejected: \
             {corrupt_rejected}/{truncation_rejected}/{version_rejected}"
        ),
    );
}

// ---------------------------------------------------------------------
// Throughput: batch prediction with the synthetic model sustains at
// least 5000 lines/sec single-threaded. A failure here flags a
// performance regression, not a correctness bug.
// ---------------------------------------------------------------------
#[test]
fn throughput() {
    let corpus = synthetic_corpus(500, 40);
    let hp = Hyperparams {
        dim: 16,
        bucket_size: 10_000,
        min_count: 5,
        seed: 12,
        ..Default::default()
    };
    let (trained, _) = model::train(&corpus, &hp).unwrap();
    let texts: Vec<String> =
        synthetic_corpus(2000, 41).iter().map(|l| l.text.clone()).collect();

    // warm-up
    for t in texts.iter().take(500) {
        std::hint::black_box(trained.predict_topk(t, 1, 0.0));
    }
    let start = Instant::now();
    for t in &texts {
        std::hint::black_box(trained.predict_topk(t, 1, 0.0));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let rate = texts.len() as f64 / elapsed;
    verdict(
        "throughput",
        rate >= 5000.0,
        &format!("{rate:.0} lines/sec over {} lines single-threaded", texts.len()),
    );
}

// ---------------------------------------------------------------------
// Pearson: exactly linear data gives r = 1 within 1e-12, and 100 random
// vector pairs match a brute-force oracle within 1e-10.
// ---------------------------------------------------------------------
#[test]
fn pearson_oracle() {
    let x: Vec<f64> = (0..200).map(|i| f64::from(i) * 0.37 + 1.2).collect();
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
    let r_linear = pearson(&x, &y).unwrap();
    let linear_ok = (r_linear - 1.0).abs() <= 1e-12;

    let y_neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let r_neg = pearson(&x, &y_neg).unwrap();
    let neg_ok = (r_neg + 1.0).abs() <= 1e-12;

    // brute-force oracle over the uncentered moment sums
    let oracle = |x: &[f64], y: &[f64]| {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let syy: f64 = y.iter().map(|v| v * v).sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xF00D);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let len = rng.random_range(3..=400usize);
        let a: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
        let r = pearson(&a, &b).unwrap();
        worst = worst.max((r - oracle(&a, &b)).abs());
    }
    verdict(
        "pearson",
        linear_ok && neg_ok && worst < 1e-10,
        &format!("linear r-1 = {:.2e}; worst oracle deviation {worst:.2e}", r_linear - 1.0),
    );
}

// ---------------------------------------------------------------------
// Optional full-scale reproduction. Needs the released training corpus
// and the FLORES-200 dev-test split, which are not bundled. Point
// LID_FULL_TRAIN at the training file (__label__ format), LID_FULL_TEXTS
// at the dev-test sentences, and LID_FULL_GOLD at the aligned gold
// labels, then run:
//   cargo test -p lid-cli --test acceptance -- --ignored --nocapture
// ---------------------------------------------------------------------
#[test]
#[ignore = "needs the full released dataset; see the test doc comment"]
fn optional_full_scale() {
    let train = std::env::var("LID_FULL_TRAIN").expect("set LID_FULL_TRAIN");
    let texts = std::env::var("LID_FULL_TEXTS").expect("set LID_FULL_TEXTS");
    let gold = std::env::var("LID_FULL_GOLD").expect("set LID_FULL_GOLD");
    let threads = std::env::var("LID_FULL_THREADS").unwrap_or_else(|_| "8".into());

    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("full.bin");
    let pred_path = dir.path().join("pred.txt");
    let report_path = dir.path().join("report.json");
    assert!(lid()
        .args(["train", "--threads", &threads, "--input", &train])
        .arg("--output")
        .arg(&model_path)
        .status()
        .unwrap()
        .success());
    assert!(lid()
        .args(["predict", "--threads", &threads, "--model"])
        .arg(&model_path)
        .args(["--input", &texts])
        .arg("--output")
        .arg(&pred_path)
        .status()
        .unwrap()
        .success());
    assert!(lid()
        .args(["eval", "--gold", &gold, "--predictions"])
        .arg(&pred_path)
        .arg("--output")
        .arg(&report_path)
        .status()
        .unwrap()
        .success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let f1 = json["macro_f1"].as_f64().unwrap();
    let fpr = json["macro_fpr"].as_f64().unwrap();
    verdict(
        "optional full scale",
        (f1 - 0.927).abs() <= 0.01 && (fpr - 0.033).abs() <= 0.005,
        &format!("macro F1 {f1:.4} (target 0.927±0.01), macro FPR {fpr:.4} (target 0.033±0.005)"),
    );
}
