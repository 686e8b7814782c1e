//! A language-identification toolkit: corpus preparation (cleaning, script
//! filtering, temperature rebalancing), a character-n-gram linear softmax
//! classifier over 200+ language labels, fast batch inference, and a
//! multiclass evaluation suite (macro F1, per-class FPR, confusion matrices,
//! taxonomy breakdowns, cross-system label normalization).

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod label;
pub mod model;

pub use error::{LidError, Result};
pub use label::LanguageLabel;
