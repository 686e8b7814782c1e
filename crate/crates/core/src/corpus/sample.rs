use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::LabeledLine;
use crate::error::{LidError, Result};
use crate::label::LanguageLabel;

/// Splits `total` into one quota per weight using largest-remainder
/// rounding: quotas are `floor(total * w / sum)` plus one extra unit for the
/// entries with the largest fractional parts, so the quotas always sum to
/// `total` exactly. Ties go to the earlier entry, so the result does not
/// depend on iteration order as long as the weights come in a fixed order.
pub fn largest_remainder_quotas(weights: &[f64], total: u64) -> Vec<u64> {
    if weights.is_empty() {
        return Vec::new();
    }
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut quotas: Vec<u64> = exact.iter().map(|e| e.floor() as u64).collect();
    let assigned: u64 = quotas.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take((total - assigned) as usize) {
        quotas[i] += 1;
    }
    quotas
}

/// Per-label RNG stream: the draw order inside one label must not depend on
/// how many other labels exist, so each label gets its own seed derived from
/// the master seed and the label text.
fn label_stream_seed(seed: u64, label: &LanguageLabel) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for b in seed.to_le_bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(PRIME);
    }
    for b in label.to_string().bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(PRIME);
    }
    h
}

/// Rebalances a corpus by temperature sampling.
///
/// Each label's share of the output is proportional to `p^alpha`, where `p`
/// is its fraction of the input; quotas are fixed with largest-remainder
/// rounding so the output has exactly `target_total` lines. Within a label,
/// lines are drawn uniformly without replacement and kept in source order;
/// when the quota exceeds the available lines, every line is emitted once
/// and the remainder is drawn uniformly with replacement. The output is
/// fully determined by `seed`.
pub fn temperature_sample(
    corpus: &[LabeledLine],
    alpha: f64,
    seed: u64,
    target_total: u64,
) -> Result<Vec<LabeledLine>> {
    if corpus.is_empty() {
        return Err(LidError::EmptyCorpus);
    }
    if !(alpha > 0.0) {
        return Err(LidError::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }

    let mut by_label: BTreeMap<LanguageLabel, Vec<usize>> = BTreeMap::new();
    for (i, line) in corpus.iter().enumerate() {
        by_label.entry(line.label).or_default().push(i);
    }
    if target_total < by_label.len() as u64 {
        return Err(LidError::InvalidParameter(format!(
            "target_total {target_total} is below the number of labels {}",
            by_label.len()
        )));
    }

    let total = corpus.len() as f64;
    let weights: Vec<f64> =
        by_label.values().map(|idx| (idx.len() as f64 / total).powf(alpha)).collect();
    let quotas = largest_remainder_quotas(&weights, target_total);

    let mut out = Vec::with_capacity(target_total as usize);
    for ((label, indices), &quota) in by_label.iter().zip(&quotas) {
        let mut rng = ChaCha8Rng::seed_from_u64(label_stream_seed(seed, label));
        let available = indices.len() as u64;
        if quota <= available {
            let mut chosen =
                rand::seq::index::sample(&mut rng, indices.len(), quota as usize).into_vec();
            chosen.sort_unstable();
            out.extend(chosen.into_iter().map(|k| corpus[indices[k]].clone()));
        } else {
            out.extend(indices.iter().map(|&i| corpus[i].clone()));
            for _ in 0..quota - available {
                let k = rng.random_range(0..indices.len());
                out.push(corpus[indices[k]].clone());
            }
        }
    }
    Ok(out)
}
