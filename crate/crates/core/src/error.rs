use std::path::PathBuf;

use thiserror::Error;

use crate::models::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VocabError {
    #[error("vocabulary needs at least 2 tokens, got {0}")]
    TooSmall(usize),
    #[error("duplicate token `{0}` in vocabulary")]
    Duplicate(String),
    #[error("token `{0}` is empty or contains whitespace")]
    BadToken(String),
    #[error("special token `{0}` is not in the vocabulary")]
    MissingSpecial(String),
    #[error("BOS and EOS must be distinct")]
    SameSpecial,
    #[error("unknown token `{0}`")]
    UnknownToken(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("beam_size must be >= 1")]
    BeamSize,
    #[error("patience must be a finite value > 0, got {0}")]
    Patience(f64),
    #[error("max_length must be >= 2, got {0}")]
    MaxLength(usize),
    #[error("max_length ({max_length}) must exceed min_length + 1 ({min_length} + 1)")]
    MinLength {
        min_length: usize,
        max_length: usize,
    },
    #[error("length_penalty must be finite, got {0}")]
    LengthPenalty(f64),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Format { location: String, message: String },
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error("model failed validation:\n{}", render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("no table row for context `{context}`{}", .input.as_ref().map(|i| format!(" (input `{i}`)")).unwrap_or_default())]
    UnknownContext {
        context: String,
        input: Option<String>,
    },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("invalid model parameter: {0}")]
    Parameter(String),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("  {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration needs up to {required} sequences, limit is {limit}")]
    LimitExceeded { required: u128, limit: u128 },
    #[error("no finished sequence is reachable under the constraints")]
    NoFinished,
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

impl From<ModelError> for OracleError {
    fn from(e: ModelError) -> Self {
        OracleError::Decode(e.into())
    }
}

impl From<ConfigError> for OracleError {
    fn from(e: ConfigError) -> Self {
        OracleError::Decode(e.into())
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    Spec(String),
    #[error("decode failed on input {input:?} at {axis}={value}: {source}")]
    Decode {
        input: Option<String>,
        axis: &'static str,
        value: f64,
        #[source]
        source: DecodeError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Csv(#[from] std::io::Error),
}
