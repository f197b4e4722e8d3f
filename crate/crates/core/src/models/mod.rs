//! Next-token scoring models.
//!
//! A [`ScorerModel`] maps an optional input key plus a decoded prefix to one
//! log-probability per vocabulary entry. BOS is never a legal continuation and
//! always comes back as [`MASKED_LOGPROB`].

mod ngram;
mod random;
mod tabular;
mod uniform;

use std::fmt;

pub use ngram::{train_ngram, NGramModel};
pub use random::{random_tabular, RandomModelSpec};
pub use tabular::{Fallback, TabularFile, TabularModel};
pub use uniform::UniformModel;

use crate::error::ModelError;
use crate::types::{is_masked, TokenId, Vocabulary, MASKED_LOGPROB};

/// Rows must sum to one within this.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

pub trait ScorerModel: Send + Sync {
    fn vocabulary(&self) -> &Vocabulary;

    /// Log-probabilities for the token following `prefix` (which starts at BOS).
    fn next_logprobs(
        &self,
        input: Option<&str>,
        prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError>;

    /// Normalization and non-negativity findings; empty when the model is sound.
    fn violations(&self) -> Vec<Violation> {
        Vec::new()
    }
}

impl<M: ScorerModel + ?Sized> ScorerModel for &M {
    fn vocabulary(&self) -> &Vocabulary {
        (**self).vocabulary()
    }

    fn next_logprobs(
        &self,
        input: Option<&str>,
        prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError> {
        (**self).next_logprobs(input, prefix)
    }

    fn violations(&self) -> Vec<Violation> {
        (**self).violations()
    }
}

impl<M: ScorerModel + ?Sized> ScorerModel for Box<M> {
    fn vocabulary(&self) -> &Vocabulary {
        (**self).vocabulary()
    }

    fn next_logprobs(
        &self,
        input: Option<&str>,
        prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError> {
        (**self).next_logprobs(input, prefix)
    }

    fn violations(&self) -> Vec<Violation> {
        (**self).violations()
    }
}

pub fn validate_model<M: ScorerModel + ?Sized>(model: &M) -> Vec<Violation> {
    model.violations()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    Negative { token: String, prob: f64 },
    NonFinite { token: String },
    BosMass { prob: f64 },
    Sum { sum: f64 },
}

/// One failed check on one context row.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub input: Option<String>,
    pub context: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(input) = &self.input {
            write!(f, "input `{input}` ")?;
        }
        write!(f, "context `{}`: ", self.context)?;
        match &self.kind {
            ViolationKind::Negative { token, prob } => {
                write!(f, "negative probability {prob} for token `{token}`")
            }
            ViolationKind::NonFinite { token } => {
                write!(f, "non-finite probability for token `{token}`")
            }
            ViolationKind::BosMass { prob } => write!(f, "BOS has probability {prob}, must be 0"),
            ViolationKind::Sum { sum } => write!(f, "row sums to {sum}, expected 1"),
        }
    }
}

/// Checks one probability row against the model invariants.
pub(crate) fn check_row(
    vocab: &Vocabulary,
    input: Option<&str>,
    context: &str,
    probs: &[f64],
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind| {
        out.push(Violation {
            input: input.map(str::to_string),
            context: context.to_string(),
            kind,
        })
    };
    for (i, &p) in probs.iter().enumerate() {
        let token = vocab.tokens()[i].clone();
        if !p.is_finite() {
            push(ViolationKind::NonFinite { token });
        } else if p < 0.0 {
            push(ViolationKind::Negative { token, prob: p });
        }
    }
    let bos = probs[vocab.bos().index()];
    if bos > 0.0 && bos.is_finite() {
        push(ViolationKind::BosMass { prob: bos });
    }
    let sum: f64 = probs.iter().sum();
    if sum.is_finite() && (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        push(ViolationKind::Sum { sum });
    }
    out
}

/// Natural log with zero probability mapped to the mask sentinel and BOS forced masked.
pub(crate) fn to_logprobs(vocab: &Vocabulary, probs: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = probs
        .iter()
        .map(|&p| {
            if p > 0.0 {
                p.ln().max(MASKED_LOGPROB)
            } else {
                MASKED_LOGPROB
            }
        })
        .collect();
    out[vocab.bos().index()] = MASKED_LOGPROB;
    out
}

/// Sum of `exp` over unmasked entries.
pub fn unmasked_mass(logprobs: &[f64]) -> f64 {
    logprobs
        .iter()
        .filter(|lp| !is_masked(**lp))
        .map(|lp| lp.exp())
        .sum()
}

/// The last `order` tokens of `prefix`, left-padded with BOS.
pub(crate) fn padded_context(prefix: &[TokenId], order: usize, bos: TokenId) -> Vec<TokenId> {
    let take = order.min(prefix.len());
    let mut ctx = vec![bos; order - take];
    ctx.extend_from_slice(&prefix[prefix.len() - take..]);
    ctx
}
