//! Greedy, vanilla beam and first-come-first-served (FCFS) beam decoding.
//!
//! All decoders expand every live hypothesis over the whole vocabulary, mask
//! forbidden tokens with [`apply_constraints`], and rank with the canonical
//! hypothesis order, so their outputs are deterministic and directly comparable.

mod constraints;
mod fcfs;
mod greedy;
mod reference;
mod select;
mod trace;
mod vanilla;

use serde::{Deserialize, Serialize};

pub use constraints::{apply_constraints, banned_ngram_tokens, has_repeated_ngram};
pub use fcfs::{fcfs_beam, fcfs_beam_traced};
pub use greedy::{greedy_decode, greedy_decode_traced};
pub use reference::{fcfs_reference, fcfs_reference_traced};
pub use select::{select_candidates, Candidate};
pub use trace::{Fate, Trace, TraceEvent, TraceStep};
pub use vanilla::{vanilla_beam, vanilla_beam_traced};

use crate::error::{DecodeError, ModelError};
use crate::models::ScorerModel;
use crate::types::{is_masked, DecodeResult, DecoderConfig, Hypothesis, SearchStats, TokenId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    Vanilla,
    Fcfs,
    /// FCFS with the classic `|F| >= k` stop and no patience factor.
    FcfsReference,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Greedy,
        Algorithm::Vanilla,
        Algorithm::Fcfs,
        Algorithm::FcfsReference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Vanilla => "vanilla",
            Algorithm::Fcfs => "fcfs",
            Algorithm::FcfsReference => "fcfs-reference",
        }
    }

    pub fn decode<M: ScorerModel + ?Sized>(
        self,
        model: &M,
        input: Option<&str>,
        config: &DecoderConfig,
    ) -> Result<DecodeResult, DecodeError> {
        match self {
            Algorithm::Greedy => greedy_decode(model, input, config),
            Algorithm::Vanilla => vanilla_beam(model, input, config),
            Algorithm::Fcfs => fcfs_beam(model, input, config),
            Algorithm::FcfsReference => fcfs_reference(model, input, config),
        }
    }

    pub fn decode_traced<M: ScorerModel + ?Sized>(
        self,
        model: &M,
        input: Option<&str>,
        config: &DecoderConfig,
    ) -> Result<(DecodeResult, Trace), DecodeError> {
        match self {
            Algorithm::Greedy => greedy_decode_traced(model, input, config),
            Algorithm::Vanilla => vanilla_beam_traced(model, input, config),
            Algorithm::Fcfs => fcfs_beam_traced(model, input, config),
            Algorithm::FcfsReference => fcfs_reference_traced(model, input, config),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm `{s}` (expected greedy|vanilla|fcfs|fcfs-reference)")
            })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Constrained next-token log-probabilities for one unfinished prefix.
pub(crate) fn constrained_logprobs<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    prefix: &[TokenId],
    config: &DecoderConfig,
) -> Result<Vec<f64>, ModelError> {
    let raw = model.next_logprobs(input, prefix)?;
    assert_eq!(
        raw.len(),
        model.vocabulary().len(),
        "model returned a vector of the wrong size"
    );
    Ok(apply_constraints(
        raw,
        prefix,
        model.vocabulary().eos(),
        config,
    ))
}

/// Scores every unmasked continuation of every beam member.
pub(crate) fn expand<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    beam: &[Hypothesis],
    config: &DecoderConfig,
    stats: &mut SearchStats,
) -> Result<Vec<Candidate>, ModelError> {
    let penalty = config.penalty();
    let mut out = Vec::with_capacity(beam.len() * model.vocabulary().len());
    for (parent, hyp) in beam.iter().enumerate() {
        let lps = constrained_logprobs(model, input, hyp.tokens(), config)?;
        for (tok, &lp) in lps.iter().enumerate() {
            if is_masked(lp) {
                continue;
            }
            out.push(Candidate::new(
                beam,
                parent,
                TokenId(tok as u32),
                lp,
                &penalty,
            ));
        }
    }
    stats.candidates_scored += out.len();
    Ok(out)
}

/// Recomputes `(sum_logprob, score)` for a token sequence from the model's raw
/// per-token log-probabilities.
pub fn rescore<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
    tokens: &[TokenId],
) -> Result<(f64, f64), ModelError> {
    let mut sum = 0.0;
    for i in 1..tokens.len() {
        let lps = model.next_logprobs(input, &tokens[..i])?;
        sum += lps[tokens[i].index()];
    }
    Ok((sum, config.normalized_score(sum, tokens.len() - 1)))
}

pub(crate) fn fresh_stats() -> SearchStats {
    SearchStats {
        steps_executed: 0,
        candidates_scored: 0,
        pops: 0,
        terminated_by: crate::types::Termination::MaxLength,
    }
}
