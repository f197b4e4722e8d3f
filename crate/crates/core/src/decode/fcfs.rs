use super::select::select_candidates;
use super::trace::{Fate, Recorder, Trace};
use super::{expand, fresh_stats};
use crate::error::DecodeError;
use crate::models::ScorerModel;
use crate::types::{best_of, DecodeResult, DecoderConfig, Hypothesis, Termination};

/// First-come-first-served beam decoding with a patience factor.
///
/// Each step expands the beam, then pops candidates best-first: EOS-ending ones join
/// the finished pool `F`, others refill the beam until it holds `k`. Decoding returns
/// the best of `F` as soon as `|F| >= k * patience`, checked after every addition.
/// With `patience = 1` this is the behaviour of the common library implementations.
pub fn fcfs_beam<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    run(model, input, config, None)
}

pub fn fcfs_beam_traced<M: ScorerModel + ?Sized>(
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
    let mut stats = fresh_stats();

    let mut beam = vec![Hypothesis::bos(vocab.bos())];
    let mut last_live = beam.clone();
    let mut finished: Vec<Hypothesis> = Vec::new();

    for t in 1..config.max_length {
        if beam.is_empty() {
            break;
        }
        stats.steps_executed = t;
        let expanded = expand(model, input, &beam, config, &mut stats)?;
        let ordered = select_candidates(expanded, &beam, k, config.selection_mode);
        let mut next = Vec::with_capacity(k);
        for cand in &ordered {
            if next.len() >= k {
                break;
            }
            stats.pops += 1;
            let hyp = cand.materialize(&beam, eos, &penalty);
            if hyp.is_finished() {
                rec.event(&hyp, Fate::ToFinished);
                finished.push(hyp);
                if config.patience_reached(finished.len()) {
                    rec.close_step(t, &next, &finished);
                    stats.terminated_by = Termination::Patience;
                    let best = best_of(&finished).expect("non-empty").clone();
                    return Ok(DecodeResult {
                        best,
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
            last_live.clone_from(&next);
        }
        beam = next;
    }

    stats.terminated_by = Termination::MaxLength;
    let best = match best_of(&finished) {
        Some(b) => b.clone(),
        // no finished hypothesis at all: best live one, reported unfinished
        None => best_of(&last_live).expect("beam starts non-empty").clone(),
    };
    Ok(DecodeResult {
        best,
        finished_pool: finished,
        stats,
    })
}
