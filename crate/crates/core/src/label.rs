use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LidError, Result};

/// Prefix carried by labels in fasttext-style training and prediction files.
pub const LABEL_PREFIX: &str = "__label__";

/// An individual-language + script identity such as `eng_Latn`.
///
/// The language part is an ISO 639-3 code (three lowercase letters), the
/// script part an ISO 15924 code (four letters, title-case). The serialized
/// form always matches `^[a-z]{3}_[A-Z][a-z]{3}$`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageLabel {
    language: [u8; 3],
    script: [u8; 4],
}

impl LanguageLabel {
    /// Parses a label, stripping an optional `__label__` prefix.
    pub fn parse(raw: &str) -> Result<Self> {
        let code = raw.strip_prefix(LABEL_PREFIX).unwrap_or(raw);
        let bytes = code.as_bytes();
        let ok = bytes.len() == 8
            && bytes[..3].iter().all(u8::is_ascii_lowercase)
            && bytes[3] == b'_'
            && bytes[4].is_ascii_uppercase()
            && bytes[5..].iter().all(u8::is_ascii_lowercase);
        if !ok {
            return Err(LidError::MalformedCode(raw.to_string()));
        }
        let mut language = [0u8; 3];
        language.copy_from_slice(&bytes[..3]);
        let mut script = [0u8; 4];
        script.copy_from_slice(&bytes[4..]);
        Ok(Self { language, script })
    }

    /// The ISO 639-3 language code, e.g. `eng`.
    pub fn language(&self) -> &str {
        std::str::from_utf8(&self.language).expect("validated ascii")
    }

    /// The ISO 15924 script code, e.g. `Latn`.
    pub fn script(&self) -> &str {
        std::str::from_utf8(&self.script).expect("validated ascii")
    }

    /// The label in fasttext line format: `__label__eng_Latn`.
    pub fn prefixed(&self) -> String {
        format!("{LABEL_PREFIX}{self}")
    }
}

impl fmt::Display for LanguageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.language(), self.script())
    }
}

impl fmt::Debug for LanguageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LanguageLabel {
    type Err = LidError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for LanguageLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguageLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LabelVisitor;

        impl Visitor<'_> for LabelVisitor {
            type Value = LanguageLabel;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a label of the form xxx_Yyyy")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                LanguageLabel::parse(v).map_err(E::custom)
            }
        }

        deserializer.deserialize_str(LabelVisitor)
    }
}
