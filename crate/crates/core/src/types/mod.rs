//! Vocabulary, hypotheses, scoring arithmetic and decoder configuration.

mod config;
mod hypothesis;
mod penalty;
mod result;
mod vocab;

pub use config::{ConfigWarning, DecoderConfig, Preset, SelectionMode};
pub use hypothesis::{
    best_of, canonical_cmp, is_masked, rank_cmp, Hypothesis, HypothesisJson, MASKED_LOGPROB,
};
pub use penalty::{length_penalty, normalized_score, LengthPenalty, PenaltyStyle};
pub use result::{DecodeResult, SearchStats, Termination};
pub use vocab::{TokenId, Vocabulary, DEFAULT_BOS, DEFAULT_EOS};
