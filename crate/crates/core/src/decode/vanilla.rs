use super::trace::{Fate, Recorder, Trace};
use super::{expand, fresh_stats};
use crate::error::DecodeError;
use crate::models::ScorerModel;
use crate::types::{best_of, canonical_cmp, DecodeResult, DecoderConfig, Hypothesis, Termination};

/// Vanilla beam decoding.
///
/// Finished beam members are carried into the next candidate set unexpanded with
/// their score frozen, and compete with fresh expansions for the `k` beam slots. A
/// finished hypothesis that falls out of the top `k` is dropped for good. Decoding
/// stops once every beam member has finished.
pub fn vanilla_beam<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    run(model, input, config, None)
}

pub fn vanilla_beam_traced<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<(DecodeResult, Trace), DecodeError> {
    let mut trace = Trace::default();
    let res = run(model, input, config, Some(&mut trace))?;
    Ok((res, trace))
}

fn finish(beam: Vec<Hypothesis>, stats: crate::types::SearchStats) -> DecodeResult {
    let best = best_of(&beam).expect("non-empty beam").clone();
    let finished_pool = beam.into_iter().filter(Hypothesis::is_finished).collect();
    DecodeResult {
        best,
        finished_pool,
        stats,
    }
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

    for t in 1..config.max_length {
        let (done, live): (Vec<Hypothesis>, Vec<Hypothesis>) =
            beam.iter().cloned().partition(Hypothesis::is_finished);
        let expanded = expand(model, input, &live, config, &mut stats)?;
        let mut pool = done;
        pool.extend(expanded.iter().map(|c| c.materialize(&live, eos, &penalty)));
        if pool.is_empty() {
            // every live prefix is a dead end; keep the previous beam
            break;
        }
        stats.steps_executed = t;
        pool.sort_by(canonical_cmp);
        let rest = pool.split_off(k.min(pool.len()));
        stats.pops += pool.len();
        for h in &pool {
            rec.event(h, Fate::ToBeam);
        }
        for h in rest.iter().filter(|h| h.is_finished()) {
            rec.event(h, Fate::Discarded);
        }
        rec.close_step(t, &pool, &[]);
        beam = pool;
        if beam.iter().all(Hypothesis::is_finished) {
            stats.terminated_by = Termination::AllFinished;
            return Ok(finish(beam, stats));
        }
    }

    stats.terminated_by = Termination::MaxLength;
    Ok(finish(beam, stats))
}
