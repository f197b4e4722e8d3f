use super::trace::{Fate, Recorder, Trace};
use super::{constrained_logprobs, fresh_stats};
use crate::error::DecodeError;
use crate::models::ScorerModel;
use crate::types::{is_masked, DecodeResult, DecoderConfig, Hypothesis, Termination, TokenId};

/// Appends the most probable allowed token until EOS or `max_length`.
/// Ties go to the lowest token id.
pub fn greedy_decode<M: ScorerModel + ?Sized>(
    model: &M,
    input: Option<&str>,
    config: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    run(model, input, config, None)
}

pub fn greedy_decode_traced<M: ScorerModel + ?Sized>(
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
    let mut rec = Recorder::new(trace);
    let mut stats = fresh_stats();
    let mut hyp = Hypothesis::bos(vocab.bos());

    for t in 1..config.max_length {
        let lps = constrained_logprobs(model, input, hyp.tokens(), config)?;
        let mut choice: Option<(usize, f64)> = None;
        for (tok, &lp) in lps.iter().enumerate() {
            if is_masked(lp) {
                continue;
            }
            stats.candidates_scored += 1;
            if choice.is_none_or(|(_, best)| lp > best) {
                choice = Some((tok, lp));
            }
        }
        let Some((tok, lp)) = choice else {
            break;
        };
        stats.steps_executed = t;
        stats.pops += 1;
        hyp = hyp.extend(TokenId(tok as u32), lp, eos, &penalty);
        if hyp.is_finished() {
            rec.event(&hyp, Fate::ToFinished);
            rec.close_step(t, &[], std::slice::from_ref(&hyp));
            break;
        }
        rec.event(&hyp, Fate::ToBeam);
        rec.close_step(t, std::slice::from_ref(&hyp), &[]);
    }

    stats.terminated_by = if hyp.is_finished() {
        Termination::AllFinished
    } else {
        Termination::MaxLength
    };
    let finished_pool = if hyp.is_finished() {
        vec![hyp.clone()]
    } else {
        Vec::new()
    };
    Ok(DecodeResult {
        best: hyp,
        finished_pool,
        stats,
    })
}
