//! Brute-force search over every finished sequence, for checking the decoders on
//! small instances.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::decode::apply_constraints;
use crate::error::OracleError;
use crate::models::ScorerModel;
use crate::types::{canonical_cmp, is_masked, DecoderConfig, Hypothesis, TokenId};

pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationOrder {
    #[default]
    DepthFirst,
    BreadthFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: Hypothesis,
    /// Finished sequences visited.
    pub num_enumerated: usize,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    /// Finished sequences in depth-first, token-id-ascending order, each with its score.
    pub entries: Vec<(Hypothesis, f64)>,
    pub truncated: bool,
    /// Probability mass removed by constraints (including the forced final EOS).
    pub pruned_mass: f64,
}

/// `|V|^(M-2)`, the size bound checked against the enumeration limit.
pub fn required_count(vocab_size: usize, max_length: usize) -> u128 {
    (vocab_size as u128)
        .checked_pow(max_length.saturating_sub(2) as u32)
        .unwrap_or(u128::MAX)
}

struct Walker<'a, M: ScorerModel + ?Sized> {
    model: &'a M,
    input: Option<&'a str>,
    config: &'a DecoderConfig,
    eos: TokenId,
}

impl<M: ScorerModel + ?Sized> Walker<'_, M> {
    /// Raw and constrained log-probabilities after `prefix`.
    fn step(&self, prefix: &[TokenId]) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
        let raw = self.model.next_logprobs(self.input, prefix)?;
        let masked = apply_constraints(raw.clone(), prefix, self.eos, self.config);
        Ok((raw, masked))
    }

    fn finished(&self, tokens: Vec<TokenId>, sum: f64) -> Hypothesis {
        Hypothesis::from_parts(tokens, sum, self.eos, &self.config.penalty())
    }
}

/// Canonically best finished sequence over the whole constrained search space.
pub fn exhaustive_best<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<OracleResult, OracleError> {
    exhaustive_best_with(
        model,
        input,
        config,
        DEFAULT_ENUMERATION_LIMIT,
        EnumerationOrder::DepthFirst,
    )
}

pub fn exhaustive_best_with<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
    limit: u128,
    order: EnumerationOrder,
) -> Result<OracleResult, OracleError> {
    config.validate()?;
    let vocab = model.vocabulary();
    let required = required_count(vocab.len(), config.max_length);
    if required > limit {
        return Err(OracleError::LimitExceeded { required, limit });
    }
    let walker = Walker {
        model,
        input,
        config,
        eos: vocab.eos(),
    };
    let mut best: Option<Hypothesis> = None;
    let mut count = 0usize;
    let mut offer = |h: Hypothesis| {
        count += 1;
        if best
            .as_ref()
            .is_none_or(|b| canonical_cmp(&h, b) == Ordering::Less)
        {
            best = Some(h);
        }
    };

    let root = (vec![vocab.bos()], 0.0f64);
    match order {
        EnumerationOrder::DepthFirst => {
            let mut stack = vec![root];
            while let Some((prefix, sum)) = stack.pop() {
                let (_, lps) = walker.step(&prefix)?;
                // push in reverse so the lowest id is explored first
                for (tok, &lp) in lps.iter().enumerate().rev() {
                    if is_masked(lp) {
                        continue;
                    }
                    let mut next = prefix.clone();
                    next.push(TokenId(tok as u32));
                    if TokenId(tok as u32) == walker.eos {
                        offer(walker.finished(next, sum + lp));
                    } else {
                        stack.push((next, sum + lp));
                    }
                }
            }
        }
        EnumerationOrder::BreadthFirst => {
            let mut queue = VecDeque::from([root]);
            while let Some((prefix, sum)) = queue.pop_front() {
                let (_, lps) = walker.step(&prefix)?;
                for (tok, &lp) in lps.iter().enumerate() {
                    if is_masked(lp) {
                        continue;
                    }
                    let mut next = prefix.clone();
                    next.push(TokenId(tok as u32));
                    if TokenId(tok as u32) == walker.eos {
                        offer(walker.finished(next, sum + lp));
                    } else {
                        queue.push_back((next, sum + lp));
                    }
                }
            }
        }
    }

    let best = best.ok_or(OracleError::NoFinished)?;
    Ok(OracleResult {
        best,
        num_enumerated: count,
        exhausted: true,
    })
}

/// Lists finished sequences depth-first (token ids ascending), stopping after `limit`.
pub fn enumerate_finished<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
    limit: usize,
) -> Result<Enumeration, OracleError> {
    assert!(limit >= 1, "limit must be >= 1");
    config.validate()?;
    let vocab = model.vocabulary();
    let walker = Walker {
        model,
        input,
        config,
        eos: vocab.eos(),
    };
    let mut out = Enumeration {
        entries: Vec::new(),
        truncated: false,
        pruned_mass: 0.0,
    };
    let mut prefix = vec![vocab.bos()];
    dfs(&walker, &mut prefix, 0.0, limit, &mut out)?;
    Ok(out)
}

fn dfs<M: ScorerModel + ?Sized>(
    walker: &Walker<'_, M>,
    prefix: &mut Vec<TokenId>,
    sum: f64,
    limit: usize,
    out: &mut Enumeration,
) -> Result<(), OracleError> {
    let (raw, lps) = walker.step(prefix)?;
    let prefix_mass = sum.exp();
    for (tok, (&lp, &raw_lp)) in lps.iter().zip(&raw).enumerate() {
        if is_masked(lp) {
            if !is_masked(raw_lp) {
                out.pruned_mass += prefix_mass * raw_lp.exp();
            }
            continue;
        }
        if out.entries.len() >= limit {
            out.truncated = true;
            return Ok(());
        }
        let token = TokenId(tok as u32);
        prefix.push(token);
        if token == walker.eos {
            let hyp = walker.finished(prefix.clone(), sum + lp);
            let score = hyp.score();
            out.entries.push((hyp, score));
        } else {
            dfs(walker, prefix, sum + lp, limit, out)?;
        }
        prefix.pop();
    }
    Ok(())
}
