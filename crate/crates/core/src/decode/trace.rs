use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::models::ScorerModel;
use crate::types::{DecoderConfig, Hypothesis, HypothesisJson, Vocabulary};

/// What happened to a candidate taken from the expanded set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fate {
    ToBeam,
    ToFinished,
    /// A finished hypothesis that did not make the vanilla top-k and is gone for good.
    Discarded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub candidate: Hypothesis,
    pub fate: Fate,
}

/// State after step `t`: the beam `B_t`, the finished pool `F_t` (empty for vanilla,
/// whose finished hypotheses live in the beam) and the events that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub t: usize,
    pub beam: Vec<Hypothesis>,
    pub finished: Vec<Hypothesis>,
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Serialize)]
struct EventJson {
    candidate: HypothesisJson,
    fate: Fate,
}

#[derive(Serialize)]
struct StepJson {
    t: usize,
    beam: Vec<HypothesisJson>,
    finished: Vec<HypothesisJson>,
    events: Vec<EventJson>,
}

impl Trace {
    /// One JSON object per step, newline-terminated.
    pub fn to_jsonl(&self, vocab: &Vocabulary) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let js = StepJson {
                t: step.t,
                beam: step.beam.iter().map(|h| h.to_json(vocab)).collect(),
                finished: step.finished.iter().map(|h| h.to_json(vocab)).collect(),
                events: step
                    .events
                    .iter()
                    .map(|e| EventJson {
                        candidate: e.candidate.to_json(vocab),
                        fate: e.fate,
                    })
                    .collect(),
            };
            out.push_str(&serde_json::to_string(&js).expect("trace step serializes"));
            out.push('\n');
        }
        out
    }

    pub fn step(&self, t: usize) -> Option<&TraceStep> {
        self.steps.iter().find(|s| s.t == t)
    }

    /// Every hypothesis mentioned in the trace.
    pub fn hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.steps.iter().flat_map(|s| {
            s.beam
                .iter()
                .chain(&s.finished)
                .chain(s.events.iter().map(|e| &e.candidate))
        })
    }

    /// Largest gap between a recorded score and the score recomputed from the model.
    pub fn replay_error<M: ScorerModel + ?Sized>(
        &self,
        model: &M,
        input: Option<&str>,
        config: &DecoderConfig,
    ) -> Result<f64, ModelError> {
        let mut worst = 0.0f64;
        for h in self.hypotheses() {
            let (sum, score) = super::rescore(model, input, config, h.tokens())?;
            worst = worst
                .max((sum - h.sum_logprob()).abs())
                .max((score - h.score()).abs());
        }
        Ok(worst)
    }
}

/// Collects steps when tracing is on; a no-op otherwise.
pub(crate) struct Recorder<'a> {
    trace: Option<&'a mut Trace>,
    events: Vec<TraceEvent>,
}

impl<'a> Recorder<'a> {
    pub fn new(trace: Option<&'a mut Trace>) -> Self {
        Self {
            trace,
            events: Vec::new(),
        }
    }

    #[inline]
    pub fn event(&mut self, candidate: &Hypothesis, fate: Fate) {
        if self.trace.is_some() {
            self.events.push(TraceEvent {
                candidate: candidate.clone(),
                fate,
            });
        }
    }

    pub fn close_step(&mut self, t: usize, beam: &[Hypothesis], finished: &[Hypothesis]) {
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.steps.push(TraceStep {
                t,
                beam: beam.to_vec(),
                finished: finished.to_vec(),
                events: std::mem::take(&mut self.events),
            });
        }
    }
}
