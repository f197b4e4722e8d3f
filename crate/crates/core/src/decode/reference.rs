use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::apply_constraints;
use super::trace::{Fate, Recorder, Trace};
use crate::error::DecodeError;
use crate::models::ScorerModel;
use crate::types::{
    best_of, canonical_cmp, is_masked, DecodeResult, DecoderConfig, Hypothesis, SearchStats,
    Termination, TokenId,
};

/// Max-heap adapter: the canonically best hypothesis is the greatest.
struct Ranked(Hypothesis);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(&other.0, &self.0)
    }
}

/// FCFS beam decoding with the classic stop rule `|F| >= k` and no patience factor.
///
/// Kept as a separately written path (materialized hypotheses in a binary heap, no
/// candidate selection shortcut) to cross-check [`super::fcfs_beam`] at `patience = 1`.
/// The `patience` field of `config` is ignored.
pub fn fcfs_reference<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    run(model, input, config, None)
}

pub fn fcfs_reference_traced<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<(DecodeResult, Trace), DecodeError> {
    let mut trace = Trace::default();
    let res = run(model, input, config, Some(&mut trace))?;
    Ok((res, trace))
}

fn run<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
    trace: Option<&mut Trace>,
) -> Result<DecodeResult, DecodeError> {
    config.validate()?;
    let vocab = model.vocabulary();
    let eos = vocab.eos();
    let penalty = config.penalty();
    let k = config.beam_size;
    let mut rec = Recorder::new(trace);
    let mut stats = SearchStats {
        steps_executed: 0,
        candidates_scored: 0,
        pops: 0,
        terminated_by: Termination::MaxLength,
    };

    let mut beam = vec![Hypothesis::bos(vocab.bos())];
    let mut fallback = beam.clone();
    let mut finished = Vec::new();

    let mut t = 1;
    while t < config.max_length && !beam.is_empty() {
        stats.steps_executed = t;
        let mut heap = BinaryHeap::new();
        for hyp in &beam {
            let raw = model.next_logprobs(input, hyp.tokens())?;
            let lps = apply_constraints(raw, hyp.tokens(), eos, config);
            for (tok, lp) in lps.into_iter().enumerate() {
                if !is_masked(lp) {
                    heap.push(Ranked(hyp.extend(TokenId(tok as u32), lp, eos, &penalty)));
                    stats.candidates_scored += 1;
                }
            }
        }

        let mut next: Vec<Hypothesis> = Vec::new();
        while next.len() < k {
            let Some(Ranked(hyp)) = heap.pop() else {
                break;
            };
            stats.pops += 1;
            if hyp.last() == eos {
                rec.event(&hyp, Fate::ToFinished);
                finished.push(hyp);
                if finished.len() >= k {
                    rec.close_step(t, &next, &finished);
                    stats.terminated_by = Termination::Patience;
                    return Ok(DecodeResult {
                        best: best_of(&finished).unwrap().clone(),
                        finished_pool: finished,
                        stats,
                    });
                }
            } else {
                rec.event(&hyp, Fate::ToBeam);
                next.push(hyp);
            }
        }
        rec.close_step(t, &next, &finished);
        if !next.is_empty() {
            fallback = next.clone();
        }
        beam = next;
        t += 1;
    }

    let best = best_of(&finished)
        .or_else(|| best_of(&fallback))
        .unwrap()
        .clone();
    Ok(DecodeResult {
        best,
        finished_pool: finished,
        stats,
    })
}
