use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum LidError {
    #[error("malformed language code {0:?}: expected xxx_Yyyy")]
    MalformedCode(String),

    #[error("script code {0:?} has no known script expansion")]
    UnknownScript(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("corpus contains a single label; training needs at least two")]
    SingleLabel,

    #[error("feature set is empty")]
    EmptyFeatures,

    #[error("label {0} is not part of the model")]
    UnknownModelLabel(String),

    #[error("manifest line {line}: {reason}")]
    BadManifest { line: usize, reason: String },

    #[error("{name}: {source}")]
    SourceIo {
        name: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gold and prediction lengths differ: {gold} vs {predictions}")]
    LengthMismatch { gold: usize, predictions: usize },

    #[error("label {0:?} is outside the evaluation universe")]
    LabelOutsideUniverse(String),

    #[error("no mapping rule for label {0:?}")]
    UnmappedLabel(String),

    #[error("no gold label is in the supported set")]
    EmptyIntersection,

    #[error("taxonomy class {0} is outside 0..=5")]
    TaxonomyClassOutOfRange(i64),

    #[error("correlation needs at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("correlation is undefined: an input has zero variance")]
    DegenerateVariance,

    #[error("model file does not start with the expected magic bytes")]
    BadMagic,

    #[error("unsupported model format version {0}")]
    VersionMismatch(u16),

    #[error("model file is truncated or its checksum does not match")]
    ChecksumMismatch,

    #[error("malformed model payload: {0}")]
    MalformedModel(String),

    #[error("training produced a non-finite parameter; lower the learning rate")]
    NonFiniteModel,
}

pub type Result<T> = std::result::Result<T, LidError>;
