use std::cmp::Ordering;
use std::iter::once;

use crate::types::{rank_cmp, Hypothesis, LengthPenalty, SelectionMode, TokenId};

/// One scored expansion of a beam member, not yet materialized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    /// Index into the beam that was expanded.
    pub parent: usize,
    pub token: TokenId,
    pub token_logprob: f64,
    pub sum_logprob: f64,
    pub score: f64,
}

impl Candidate {
    pub fn new(
        beam: &[Hypothesis],
        parent: usize,
        token: TokenId,
        token_logprob: f64,
        penalty: &LengthPenalty,
    ) -> Self {
        let base = &beam[parent];
        let sum_logprob = base.sum_logprob() + token_logprob;
        Self {
            parent,
            token,
            token_logprob,
            sum_logprob,
            score: penalty.normalize(sum_logprob, base.generated_len() + 1),
        }
    }

    /// Canonical order between two candidates of the same beam. `Less` ranks first.
    pub fn rank_cmp(&self, other: &Self, beam: &[Hypothesis]) -> Ordering {
        let (pa, pb) = (&beam[self.parent], &beam[other.parent]);
        rank_cmp(
            (
                self.score,
                self.sum_logprob,
                pa.tokens().len() + 1,
                pa.tokens().iter().copied().chain(once(self.token)),
            ),
            (
                other.score,
                other.sum_logprob,
                pb.tokens().len() + 1,
                pb.tokens().iter().copied().chain(once(other.token)),
            ),
        )
    }

    pub fn materialize(
        &self,
        beam: &[Hypothesis],
        eos: TokenId,
        penalty: &LengthPenalty,
    ) -> Hypothesis {
        beam[self.parent].extend(self.token, self.token_logprob, eos, penalty)
    }
}

/// Orders candidates best-first.
///
/// `FullScan` sorts everything. `Top2k` keeps only the best `2k`: each beam member
/// contributes at most one EOS candidate, so the window still holds at least `k`
/// unfinished candidates and FCFS fills its beam identically.
pub fn select_candidates(
    mut expanded: Vec<Candidate>,
    beam: &[Hypothesis],
    k: usize,
    mode: SelectionMode,
) -> Vec<Candidate> {
    let cmp = |a: &Candidate, b: &Candidate| a.rank_cmp(b, beam);
    if mode == SelectionMode::Top2k {
        let cap = 2 * k;
        if cap > 0 && expanded.len() > cap {
            expanded.select_nth_unstable_by(cap - 1, cmp);
            expanded.truncate(cap);
        }
    }
    expanded.sort_by(cmp);
    expanded
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PenaltyStyle;

    fn beam() -> Vec<Hypothesis> {
        let p = LengthPenalty::new(1.0, PenaltyStyle::Power);
        let root = Hypothesis::bos(TokenId(0));
        vec![
            root.extend(TokenId(2), -0.5, TokenId(1), &p),
            root.extend(TokenId(3), -0.75, TokenId(1), &p),
        ]
    }

    fn cands(beam: &[Hypothesis], lps: &[(usize, u32, f64)]) -> Vec<Candidate> {
        let p = LengthPenalty::new(1.0, PenaltyStyle::Power);
        lps.iter()
            .map(|&(parent, tok, lp)| Candidate::new(beam, parent, TokenId(tok), lp, &p))
            .collect()
    }

    #[test]
    fn fewer_than_cap_returns_all_sorted() {
        let b = beam();
        let c = cands(&b, &[(0, 2, -2.0), (1, 3, -0.1), (0, 1, -0.3)]);
        for mode in [SelectionMode::FullScan, SelectionMode::Top2k] {
            let out = select_candidates(c.clone(), &b, 5, mode);
            assert_eq!(out.len(), 3);
            assert_eq!((out[0].parent, out[0].token), (0, TokenId(1)));
            assert_eq!((out[2].parent, out[2].token), (0, TokenId(2)));
        }
    }

    #[test]
    fn top_2k_is_prefix_of_full_scan() {
        let b = beam();
        let lps: Vec<(usize, u32, f64)> = (0..10)
            .map(|i| {
                (
                    i % 2,
                    1 + (i as u32 % 3),
                    -0.1 * ((i * 7 % 10) as f64 + 1.0),
                )
            })
            .collect();
        let c = cands(&b, &lps);
        let full = select_candidates(c.clone(), &b, 2, SelectionMode::FullScan);
        let top = select_candidates(c, &b, 2, SelectionMode::Top2k);
        assert_eq!(top.len(), 4);
        assert_eq!(&full[..4], &top[..]);
    }

    #[test]
    fn ties_broken_by_token_sequence() {
        let b = beam();
        // identical sums after extension: -0.5 + -0.5 == -0.75 + -0.25
        let c = cands(&b, &[(1, 2, -0.25), (0, 3, -0.5), (0, 2, -0.5)]);
        let full = select_candidates(c.clone(), &b, 1, SelectionMode::FullScan);
        let top = select_candidates(c, &b, 1, SelectionMode::Top2k);
        assert_eq!(&full[..2], &top[..]);
        // <s> t2 t2 < <s> t2 t3 < <s> t3 t2
        assert_eq!((full[0].parent, full[0].token), (0, TokenId(2)));
        assert_eq!((full[1].parent, full[1].token), (0, TokenId(3)));
    }
}
