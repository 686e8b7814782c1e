use unicode_script::{Script, UnicodeScript};

use crate::corpus::LabeledLine;
use crate::error::{LidError, Result};

/// The Unicode scripts accepted for one ISO 15924 code.
///
/// ISO 15924 has entries with no Unicode counterpart: `Hans`/`Hant` both map
/// to Unicode `Han`, `Jpan` covers the three scripts Japanese is written in,
/// and `Kore` covers Han plus Hangul. Everything else maps to the Unicode
/// script of the same short name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScriptSet {
    scripts: [Script; 3],
    len: u8,
}

impl ScriptSet {
    fn new(scripts: &[Script]) -> Self {
        let mut buf = [Script::Unknown; 3];
        buf[..scripts.len()].copy_from_slice(scripts);
        Self { scripts: buf, len: scripts.len() as u8 }
    }

    /// Looks up the expansion for an ISO 15924 code.
    pub fn expand(code: &str) -> Result<Self> {
        match code {
            "Hans" | "Hant" => Ok(Self::new(&[Script::Han])),
            "Jpan" => Ok(Self::new(&[Script::Han, Script::Hiragana, Script::Katakana])),
            "Kore" => Ok(Self::new(&[Script::Han, Script::Hangul])),
            _ => match Script::from_short_name(code) {
                // Zyyy/Zinh/Zzzz are not usable as an expected script.
                Some(Script::Common) | Some(Script::Inherited) | Some(Script::Unknown) | None => {
                    Err(LidError::UnknownScript(code.to_string()))
                }
                Some(script) => Ok(Self::new(&[script])),
            },
        }
    }

    pub fn contains(&self, script: Script) -> bool {
        self.scripts[..self.len as usize].contains(&script)
    }

    /// True iff at least one code point in `text` carries one of the
    /// expected scripts. Digits, punctuation, and combining marks have
    /// Script=Common/Inherited and never count.
    pub fn matches(&self, text: &str) -> bool {
        text.chars().any(|c| self.contains(c.script()))
    }
}

/// True iff the line contains at least one character in the script its
/// label declares.
pub fn script_filter(line: &LabeledLine) -> Result<bool> {
    let expected = ScriptSet::expand(line.label.script())?;
    Ok(expected.matches(&line.text))
}
