//! Shared fixtures: artificial "languages" with disjoint character
//! inventories, one Unicode block each.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lid_core::corpus::LabeledLine;
use lid_core::label::LanguageLabel;

/// (label, inclusive code-point range of the language's alphabet)
pub const LANGS: [(&str, u32, u32); 10] = [
    ("zaa_Latn", 0x61, 0x7A),      // a-z
    ("zab_Cyrl", 0x430, 0x44F),    // а-я
    ("zac_Grek", 0x3B1, 0x3C9),    // α-ω
    ("zad_Hebr", 0x5D0, 0x5EA),    // א-ת
    ("zae_Arab", 0x621, 0x63A),    // Arabic letters
    ("zaf_Deva", 0x905, 0x939),    // Devanagari letters
    ("zag_Hira", 0x3041, 0x3096),  // Hiragana
    ("zah_Kana", 0x30A1, 0x30F6),  // Katakana
    ("zai_Hang", 0xAC00, 0xACFF),  // Hangul syllables
    ("zaj_Hani", 0x4E00, 0x4EFF),  // CJK ideographs
];

/// Deterministic corpus: per language, lines of 3-8 words drawn from a
/// 40-word pool over that language's alphabet.
pub fn synthetic_corpus(lines_per_lang: usize, seed: u64) -> Vec<LabeledLine> {
    let mut corpus = Vec::with_capacity(lines_per_lang * LANGS.len());
    for (i, &(code, lo, hi)) in LANGS.iter().enumerate() {
        let label = LanguageLabel::parse(code).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((i as u64 + 1) * 0x9E37));
        let alphabet: Vec<char> = (lo..=hi).filter_map(char::from_u32).collect();
        let pool: Vec<String> = (0..40)
            .map(|_| {
                let len = rng.random_range(3..=8);
                (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
            })
            .collect();
        for _ in 0..lines_per_lang {
            let words = rng.random_range(3..=8);
            let text: Vec<&str> =
                (0..words).map(|_| pool[rng.random_range(0..pool.len())].as_str()).collect();
            corpus.push(LabeledLine { text: text.join(" "), label });
        }
    }
    corpus
}

/// Splits a corpus into (train, test) keeping `test_per_lang` lines of each
/// language for the held-out set.
pub fn train_test_split(
    corpus: &[LabeledLine],
    lines_per_lang: usize,
    test_per_lang: usize,
) -> (Vec<LabeledLine>, Vec<LabeledLine>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for chunk in corpus.chunks(lines_per_lang) {
        let cut = lines_per_lang - test_per_lang;
        train.extend_from_slice(&chunk[..cut]);
        test.extend_from_slice(&chunk[cut..]);
    }
    (train, test)
}

pub fn write_texts(path: &Path, lines: &[LabeledLine]) {
    let body: String = lines.iter().map(|l| format!("{}\n", l.text)).collect();
    std::fs::write(path, body).unwrap();
}

pub fn lid() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_lid"))
}
