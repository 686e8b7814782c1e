//! Binary model file: magic `OLID`, a u16 format version, hyperparameters,
//! label list, vocabulary, and the two weight matrices as little-endian
//! IEEE-754 single precision, trailed by a CRC-32 of the payload.

use std::fs;
use std::path::Path;

use crate::error::{LidError, Result};
use crate::features::Vocabulary;
use crate::label::LanguageLabel;
use crate::model::{Hyperparams, Loss, Matrix, Model};

pub const MAGIC: [u8; 4] = *b"OLID";
pub const FORMAT_VERSION: u16 = 1;

/// Bytes before the payload: magic plus version.
const HEADER_LEN: usize = 6;
/// Trailing CRC-32.
const TRAILER_LEN: usize = 4;

pub fn save(model: &Model, path: &Path) -> Result<()> {
    let mut payload = Vec::new();
    write_hyperparams(&mut payload, model.hyperparams());
    write_labels(&mut payload, model.labels());
    write_vocab(&mut payload, model.vocab());
    write_matrix(&mut payload, model.input_embeddings());
    write_matrix(&mut payload, model.output_weights());

    let mut bytes = Vec::with_capacity(HEADER_LEN + payload.len() + TRAILER_LEN);
    bytes.extend_from_slice(&MAGIC);
    bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    bytes.extend_from_slice(&payload);
    bytes.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    fs::write(path, bytes)
        .map_err(|source| LidError::SourceIo { name: path.display().to_string(), source })
}

pub fn load(path: &Path) -> Result<Model> {
    let bytes = fs::read(path)
        .map_err(|source| LidError::SourceIo { name: path.display().to_string(), source })?;
    if bytes.len() < HEADER_LEN {
        return Err(LidError::ChecksumMismatch);
    }
    if bytes[..4] != MAGIC {
        return Err(LidError::BadMagic);
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FORMAT_VERSION {
        return Err(LidError::VersionMismatch(version));
    }
    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(LidError::ChecksumMismatch);
    }
    let payload = &bytes[HEADER_LEN..bytes.len() - TRAILER_LEN];
    let stored = u32::from_le_bytes(bytes[bytes.len() - TRAILER_LEN..].try_into().unwrap());
    if crc32fast::hash(payload) != stored {
        return Err(LidError::ChecksumMismatch);
    }

    let mut cursor = Cursor { buf: payload, pos: 0 };
    let hp = read_hyperparams(&mut cursor)?;
    let labels = read_labels(&mut cursor)?;
    let vocab = read_vocab(&mut cursor, &hp)?;
    let input = read_matrix(&mut cursor)?;
    let output = read_matrix(&mut cursor)?;
    if cursor.pos != payload.len() {
        return Err(LidError::MalformedModel("trailing bytes after matrices".into()));
    }
    if !input.is_finite() || !output.is_finite() {
        return Err(LidError::MalformedModel("non-finite weight".into()));
    }
    Model::from_parts(vocab, labels, hp, input, output)
}

fn write_hyperparams(out: &mut Vec<u8>, hp: &Hyperparams) {
    out.push(match hp.loss {
        Loss::Softmax => 0u8,
    });
    out.extend_from_slice(&hp.epochs.to_le_bytes());
    out.extend_from_slice(&hp.dim.to_le_bytes());
    out.extend_from_slice(&hp.ngram_min.to_le_bytes());
    out.extend_from_slice(&hp.ngram_max.to_le_bytes());
    out.extend_from_slice(&hp.word_ngrams.to_le_bytes());
    out.extend_from_slice(&hp.bucket_size.to_le_bytes());
    out.extend_from_slice(&hp.threads.to_le_bytes());
    out.extend_from_slice(&hp.min_count.to_le_bytes());
    out.extend_from_slice(&hp.seed.to_le_bytes());
    out.extend_from_slice(&hp.lr0.to_le_bytes());
    out.extend_from_slice(&hp.sample_alpha.to_le_bytes());
}

fn write_labels(out: &mut Vec<u8>, labels: &[LanguageLabel]) {
    out.extend_from_slice(&(labels.len() as u32).to_le_bytes());
    for label in labels {
        out.extend_from_slice(label.to_string().as_bytes());
    }
}

fn write_vocab(out: &mut Vec<u8>, vocab: &Vocabulary) {
    out.extend_from_slice(&vocab.word_count().to_le_bytes());
    for (word, count) in vocab.words_and_counts() {
        out.extend_from_slice(&(word.len() as u32).to_le_bytes());
        out.extend_from_slice(word.as_bytes());
        out.extend_from_slice(&count.to_le_bytes());
    }
}

fn write_matrix(out: &mut Vec<u8>, matrix: &Matrix) {
    out.extend_from_slice(&(matrix.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(matrix.cols() as u32).to_le_bytes());
    for &v in matrix.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&end| end <= self.buf.len())
            .ok_or_else(|| LidError::MalformedModel("payload ended early".into()))?;
        let slice = &self.buf[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn str(&mut self, len: usize) -> Result<&'a str> {
        std::str::from_utf8(self.take(len)?)
            .map_err(|_| LidError::MalformedModel("non-UTF-8 string in payload".into()))
    }
}

fn read_hyperparams(c: &mut Cursor) -> Result<Hyperparams> {
    let loss = match c.u8()? {
        0 => Loss::Softmax,
        other => return Err(LidError::MalformedModel(format!("unknown loss tag {other}"))),
    };
    Ok(Hyperparams {
        loss,
        epochs: c.u32()?,
        dim: c.u32()?,
        ngram_min: c.u32()?,
        ngram_max: c.u32()?,
        word_ngrams: c.u32()?,
        bucket_size: c.u32()?,
        threads: c.u32()?,
        min_count: c.u64()?,
        seed: c.u64()?,
        lr0: c.f64()?,
        sample_alpha: c.f64()?,
    })
}

fn read_labels(c: &mut Cursor) -> Result<Vec<LanguageLabel>> {
    let count = c.u32()? as usize;
    let mut labels = Vec::with_capacity(count);
    for _ in 0..count {
        labels.push(LanguageLabel::parse(c.str(8)?)?);
    }
    Ok(labels)
}

fn read_vocab(c: &mut Cursor, hp: &Hyperparams) -> Result<Vocabulary> {
    let count = c.u32()? as usize;
    let mut words = Vec::with_capacity(count);
    let mut counts = Vec::with_capacity(count);
    for _ in 0..count {
        let len = c.u32()? as usize;
        words.push(c.str(len)?.to_string());
        counts.push(c.u64()?);
    }
    Vocabulary::from_parts(words, counts, hp.min_count, hp.bucket_size, hp.ngram_min, hp.ngram_max)
}

fn read_matrix(c: &mut Cursor) -> Result<Matrix> {
    let rows = c.u64()? as usize;
    let cols = c.u32()? as usize;
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| LidError::MalformedModel("matrix dimensions overflow".into()))?;
    let bytes = c.take(n * 4)?;
    let data = bytes.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().unwrap())).collect();
    Matrix::from_vec(rows, cols, data)
}
