//! Error type shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs, computing
/// distances, tuning, or reading datasets.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("unequal lengths: {left} vs {right}")]
    UnequalLengths { left: usize, right: usize },

    #[error("series count {series} does not match label count {labels}")]
    CountMismatch { series: usize, labels: usize },

    #[error("empty epsilon set")]
    EmptyEpsilonSet,

    #[error("epsilon scales must be strictly increasing, got {prev} before {next}")]
    NonIncreasingScales { prev: u32, next: u32 },

    #[error("epsilon {epsilon} is invalid under the strict convention (requires epsilon >= 1)")]
    InvalidEpsilonForConvention { epsilon: u32 },

    #[error("eta too small: no power of two <= {limit}")]
    EtaTooSmall { limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series too long for enumeration: {len} > {max}")]
    TooLongForEnumeration { len: usize, max: usize },

    #[error("need at least {needed} instances, got {got}")]
    TooFewInstances { needed: usize, got: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("undefined skill score: positive count {p}, negative count {n}")]
    UndefinedSkillScore { p: u64, n: u64 },

    #[error("zero accuracy denominator")]
    ZeroAccuracy,

    #[error("empty qualifying set")]
    EmptyQualifyingSet,

    #[error("unknown measure `{name}`, available: {available}")]
    UnknownMeasure { name: String, available: String },

    #[error("missing parameter {flag} for measure `{measure}`")]
    MissingParameter {
        measure: &'static str,
        flag: &'static str,
    },

    #[error("empty file: {path}")]
    EmptyFile { path: PathBuf },

    #[error("{path}: line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: line {line}, field {field}: invalid number `{value}`")]
    InvalidField {
        path: PathBuf,
        line: usize,
        field: usize,
        value: String,
    },

    #[error("{path}: line {line}: invalid class label `{value}`")]
    InvalidLabel {
        path: PathBuf,
        line: usize,
        value: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}
