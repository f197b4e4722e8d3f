use serde::{Deserialize, Serialize};

use super::hypothesis::Hypothesis;

/// Which exit of the decoding loop fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// FCFS: the finished pool reached `k * p`.
    Patience,
    /// Vanilla: every beam member ends in EOS. Greedy: EOS emitted.
    AllFinished,
    /// Ran out of steps (or out of live hypotheses).
    MaxLength,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Patience => "patience",
            Termination::AllFinished => "all_finished",
            Termination::MaxLength => "max_length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Outer-loop iterations run.
    pub steps_executed: usize,
    /// Unmasked candidates scored during expansion.
    pub candidates_scored: usize,
    /// Candidates taken off the expanded set in ranked order.
    pub pops: usize,
    pub terminated_by: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    /// Canonical best of `finished_pool` when it is non-empty; otherwise an unfinished fallback.
    pub best: Hypothesis,
    pub finished_pool: Vec<Hypothesis>,
    pub stats: SearchStats,
}
