//! Text to feature ids: frequent-word ids plus hashed character n-grams.
//!
//! The feature id space is `[0, W + B)`: ids below `W` are vocabulary words,
//! ids in `[W, W + B)` are n-gram hash buckets.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::corpus::LabeledLine;
use crate::error::{LidError, Result};

/// End-of-sentence sentinel appended to every token sequence. It is always
/// part of the vocabulary and yields no character n-grams.
pub const EOS: &str = "</s>";

/// Word boundary markers wrapped around each token before n-gram extraction.
pub const BOW: char = '<';
pub const EOW: char = '>';

pub type FeatureId = u32;

const FNV32_OFFSET: u32 = 0x811C_9DC5;
const FNV32_PRIME: u32 = 0x0100_0193;

/// FNV-1a 32-bit over a byte string; stable across runs and platforms.
pub fn fnv1a32(bytes: &[u8]) -> u32 {
    let mut h = FNV32_OFFSET;
    for &b in bytes {
        h = (h ^ u32::from(b)).wrapping_mul(FNV32_PRIME);
    }
    h
}

/// Hashes one n-gram into `[0, bucket_size)`.
pub fn hash_ngram(ngram: &str, bucket_size: u32) -> u32 {
    assert!(bucket_size > 0, "bucket_size must be positive");
    fnv1a32(ngram.as_bytes()) % bucket_size
}

/// Splits on Unicode whitespace and appends the end-of-sentence sentinel.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut tokens: Vec<&str> = text.split_whitespace().collect();
    tokens.push(EOS);
    tokens
}

/// All code-point substrings of length `nmin..=nmax` of the word wrapped in
/// boundary markers, enumerated by length and then position. The sentinel
/// yields no n-grams.
pub fn char_ngrams(word: &str, nmin: usize, nmax: usize) -> Vec<String> {
    assert!(1 <= nmin && nmin <= nmax, "need 1 <= nmin <= nmax");
    if word == EOS {
        return Vec::new();
    }
    let wrapped: Vec<char> =
        std::iter::once(BOW).chain(word.chars()).chain(std::iter::once(EOW)).collect();
    let mut out = Vec::new();
    for n in nmin..=nmax.min(wrapped.len()) {
        for window in wrapped.windows(n) {
            out.push(window.iter().collect());
        }
    }
    out
}

/// Streams the bucket hash of every n-gram of `word` without allocating the
/// n-gram strings: for each start position the FNV state is extended one
/// code point at a time. Produces the same multiset as hashing the output of
/// [`char_ngrams`].
fn for_each_ngram_hash<F: FnMut(u32)>(word: &str, nmin: usize, nmax: usize, bucket: u32, mut f: F) {
    if word == EOS {
        return;
    }
    let wrapped: Vec<char> =
        std::iter::once(BOW).chain(word.chars()).chain(std::iter::once(EOW)).collect();
    let len = wrapped.len();
    let mut utf8 = [0u8; 4];
    for start in 0..len.saturating_sub(nmin - 1) {
        let mut h = FNV32_OFFSET;
        let stop = (start + nmax).min(len);
        for (n, &c) in wrapped[start..stop].iter().enumerate() {
            for &b in c.encode_utf8(&mut utf8).as_bytes() {
                h = (h ^ u32::from(b)).wrapping_mul(FNV32_PRIME);
            }
            if n + 1 >= nmin {
                f(h % bucket);
            }
        }
    }
}

/// Frequent-word table plus the hashed n-gram bucket space.
#[derive(Clone, Debug, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, FeatureId>,
    min_count: u64,
    bucket_size: u32,
    ngram_min: u32,
    ngram_max: u32,
}

impl Vocabulary {
    /// Counts word types over the corpus and keeps those seen at least
    /// `min_count` times (the sentinel is always kept). Ids are dense,
    /// assigned by descending count with lexicographic tie-break.
    pub fn build(
        corpus: &[LabeledLine],
        min_count: u64,
        bucket_size: u32,
        ngram_min: u32,
        ngram_max: u32,
    ) -> Result<Self> {
        if corpus.is_empty() {
            return Err(LidError::EmptyCorpus);
        }
        if min_count < 1 {
            return Err(LidError::InvalidParameter("min_count must be at least 1".into()));
        }
        if bucket_size < 1 {
            return Err(LidError::InvalidParameter("bucket_size must be at least 1".into()));
        }
        if ngram_min < 1 || ngram_min > ngram_max {
            return Err(LidError::InvalidParameter(format!(
                "need 1 <= ngram_min <= ngram_max, got {ngram_min}..{ngram_max}"
            )));
        }
        let mut raw_counts: HashMap<String, u64> = HashMap::new();
        for line in corpus {
            for token in tokenize(&line.text) {
                *raw_counts.entry(token.to_string()).or_default() += 1;
            }
        }
        let mut retained: Vec<(String, u64)> = raw_counts
            .into_iter()
            .filter(|(word, count)| *count >= min_count || word == EOS)
            .collect();
        retained.sort_by(|(wa, ca), (wb, cb)| cb.cmp(ca).then_with(|| wa.cmp(wb)));

        let mut words = Vec::with_capacity(retained.len());
        let mut counts = Vec::with_capacity(retained.len());
        let mut index = HashMap::with_capacity(retained.len());
        for (id, (word, count)) in retained.into_iter().enumerate() {
            index.insert(word.clone(), id as FeatureId);
            words.push(word);
            counts.push(count);
        }
        Ok(Self { words, counts, index, min_count, bucket_size, ngram_min, ngram_max })
    }

    /// Rebuilds a vocabulary from its serialized parts (id order).
    pub(crate) fn from_parts(
        words: Vec<String>,
        counts: Vec<u64>,
        min_count: u64,
        bucket_size: u32,
        ngram_min: u32,
        ngram_max: u32,
    ) -> Result<Self> {
        if words.len() != counts.len() {
            return Err(LidError::MalformedModel("vocab words/counts length mismatch".into()));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (id, word) in words.iter().enumerate() {
            if index.insert(word.clone(), id as FeatureId).is_some() {
                return Err(LidError::MalformedModel(format!("duplicate vocab word {word:?}")));
            }
        }
        Ok(Self { words, counts, index, min_count, bucket_size, ngram_min, ngram_max })
    }

    /// Number of retained words, `W`.
    pub fn word_count(&self) -> u32 {
        self.words.len() as u32
    }

    /// Total feature-id space size, `W + B`.
    pub fn feature_space(&self) -> u32 {
        self.word_count() + self.bucket_size
    }

    pub fn bucket_size(&self) -> u32 {
        self.bucket_size
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn ngram_range(&self) -> (u32, u32) {
        (self.ngram_min, self.ngram_max)
    }

    pub fn word_id(&self, word: &str) -> Option<FeatureId> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: FeatureId) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn word_occurrences(&self, id: FeatureId) -> Option<u64> {
        self.counts.get(id as usize).copied()
    }

    /// Turns a line into its feature-id multiset: per token, the word id if
    /// the token is in the vocabulary, plus one bucket id per character
    /// n-gram. Out-of-vocabulary words contribute only n-gram ids.
    pub fn featurize(&self, text: &str) -> Vec<FeatureId> {
        let w = self.word_count();
        let mut ids = Vec::new();
        for token in tokenize(text) {
            if let Some(id) = self.word_id(token) {
                ids.push(id);
            }
            for_each_ngram_hash(
                token,
                self.ngram_min as usize,
                self.ngram_max as usize,
                self.bucket_size,
                |h| ids.push(w + h),
            );
        }
        ids
    }

    /// Debug dump: `word<TAB>id<TAB>count`, sorted by id.
    pub fn write_debug_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (id, (word, count)) in self.words.iter().zip(&self.counts).enumerate() {
            writeln!(out, "{word}\t{id}\t{count}")?;
        }
        Ok(())
    }

    pub(crate) fn words_and_counts(&self) -> impl Iterator<Item = (&str, u64)> {
        self.words.iter().map(String::as_str).zip(self.counts.iter().copied())
    }
}
