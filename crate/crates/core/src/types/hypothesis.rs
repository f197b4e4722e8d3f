use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::penalty::LengthPenalty;
use super::vocab::{TokenId, Vocabulary};

/// Log-probability assigned to forbidden tokens. Anything at or below it is treated as masked.
pub const MASKED_LOGPROB: f64 = -1e9;

#[inline]
pub fn is_masked(logprob: f64) -> bool {
    logprob <= MASKED_LOGPROB || logprob.is_nan()
}

/// A scored token sequence starting at BOS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    tokens: Vec<TokenId>,
    sum_logprob: f64,
    score: f64,
    finished: bool,
}

impl Hypothesis {
    pub fn bos(bos: TokenId) -> Self {
        Self {
            tokens: vec![bos],
            sum_logprob: 0.0,
            score: 0.0,
            finished: false,
        }
    }

    /// Rebuilds a hypothesis from a token sequence and its summed log-probability,
    /// recomputing score and finished flag.
    pub fn from_parts(
        tokens: Vec<TokenId>,
        sum_logprob: f64,
        eos: TokenId,
        penalty: &LengthPenalty,
    ) -> Self {
        assert!(!tokens.is_empty(), "a hypothesis holds at least BOS");
        let finished = tokens.last() == Some(&eos);
        let score = penalty.normalize(sum_logprob, tokens.len() - 1);
        Self {
            tokens,
            sum_logprob,
            score,
            finished,
        }
    }

    /// Appends `token`, returning a new hypothesis. Panics if `self` is already finished.
    pub fn extend(
        &self,
        token: TokenId,
        token_logprob: f64,
        eos: TokenId,
        penalty: &LengthPenalty,
    ) -> Self {
        assert!(!self.finished, "cannot extend a finished hypothesis");
        let mut tokens = Vec::with_capacity(self.tokens.len() + 1);
        tokens.extend_from_slice(&self.tokens);
        tokens.push(token);
        let sum_logprob = self.sum_logprob + token_logprob;
        let score = penalty.normalize(sum_logprob, tokens.len() - 1);
        Self {
            tokens,
            sum_logprob,
            score,
            finished: token == eos,
        }
    }

    pub fn tokens(&self) -> &[TokenId] {
        &self.tokens
    }

    pub fn sum_logprob(&self) -> f64 {
        self.sum_logprob
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Generated tokens, BOS excluded.
    pub fn generated_len(&self) -> usize {
        self.tokens.len() - 1
    }

    pub fn last(&self) -> TokenId {
        *self.tokens.last().expect("non-empty")
    }

    pub fn to_json(&self, vocab: &Vocabulary) -> HypothesisJson {
        HypothesisJson {
            tokens: vocab.render(&self.tokens),
            sum_logprob: self.sum_logprob,
            score: self.score,
        }
    }
}

/// Wire form of a hypothesis: token strings instead of ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisJson {
    pub tokens: Vec<String>,
    pub sum_logprob: f64,
    pub score: f64,
}

/// Ranks two scored sequences. `Less` means `a` ranks ahead of `b`.
///
/// Keys: score descending, sum_logprob descending, length ascending, then token ids
/// lexicographically ascending. Total over non-NaN inputs.
pub fn rank_cmp<A, B>(
    (a_score, a_sum, a_len, a_tokens): (f64, f64, usize, A),
    (b_score, b_sum, b_len, b_tokens): (f64, f64, usize, B),
) -> Ordering
where
    A: IntoIterator<Item = TokenId>,
    B: IntoIterator<Item = TokenId>,
{
    b_score
        .total_cmp(&a_score)
        .then_with(|| b_sum.total_cmp(&a_sum))
        .then_with(|| a_len.cmp(&b_len))
        .then_with(|| a_tokens.into_iter().cmp(b_tokens))
}

pub fn canonical_cmp(a: &Hypothesis, b: &Hypothesis) -> Ordering {
    rank_cmp(
        (
            a.score,
            a.sum_logprob,
            a.tokens.len(),
            a.tokens.iter().copied(),
        ),
        (
            b.score,
            b.sum_logprob,
            b.tokens.len(),
            b.tokens.iter().copied(),
        ),
    )
}

/// Canonical maximum.
pub fn best_of<'a, I>(hyps: I) -> Option<&'a Hypothesis>
where
    I: IntoIterator<Item = &'a Hypothesis>,
{
    hyps.into_iter().min_by(|a, b| canonical_cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::penalty::PenaltyStyle;

    const BOS: TokenId = TokenId(0);
    const EOS: TokenId = TokenId(1);
    const A: TokenId = TokenId(2);
    const B: TokenId = TokenId(3);

    fn power(alpha: f64) -> LengthPenalty {
        LengthPenalty::new(alpha, PenaltyStyle::Power)
    }

    #[test]
    fn extend_examples() {
        let p = power(1.0);
        let root = Hypothesis::bos(BOS);
        let one = root.extend(A, -0.5, EOS, &p);
        assert_eq!(one.tokens(), &[BOS, A]);
        assert_eq!(one.sum_logprob(), -0.5);
        assert_eq!(one.score(), -0.5);
        assert!(!one.is_finished());

        let done = one.extend(EOS, -0.1, EOS, &p);
        assert!(done.is_finished());
        assert!((done.sum_logprob() + 0.6).abs() < 1e-15);
        assert!((done.score() + 0.3).abs() < 1e-15);
        // input untouched
        assert_eq!(one.tokens(), &[BOS, A]);
        assert_eq!(root.tokens(), &[BOS]);
    }

    #[test]
    fn extend_chain_matches_independent_sum() {
        let p = power(0.7);
        let steps = [(A, -0.25), (B, -1.125), (A, -0.0625)];
        let mut h = Hypothesis::bos(BOS);
        for &(t, lp) in &steps {
            h = h.extend(t, lp, EOS, &p);
        }
        let expected: f64 = steps.iter().map(|s| s.1).sum();
        assert!((h.sum_logprob() - expected).abs() < 1e-12);
        assert!((h.score() - expected / 3f64.powf(0.7)).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "finished")]
    fn extending_finished_panics() {
        let p = power(1.0);
        let h = Hypothesis::bos(BOS).extend(EOS, -0.1, EOS, &p);
        let _ = h.extend(A, -0.1, EOS, &p);
    }

    #[test]
    fn ordering_examples() {
        let p = power(1.0);
        let x = Hypothesis::from_parts(vec![BOS, A, EOS], -2.0, EOS, &p);
        assert_eq!(canonical_cmp(&x, &x.clone()), Ordering::Equal);

        let hi = Hypothesis::from_parts(vec![BOS, A], -1.0, EOS, &p);
        let lo = Hypothesis::from_parts(vec![BOS, B], -2.0, EOS, &p);
        assert_eq!(canonical_cmp(&hi, &lo), Ordering::Less);

        let a = Hypothesis::from_parts(vec![BOS, A, EOS], -1.0, EOS, &p);
        let b = Hypothesis::from_parts(vec![BOS, B, EOS], -1.0, EOS, &p);
        assert_eq!(canonical_cmp(&a, &b), Ordering::Less);
        assert_eq!(best_of([&b, &a]), Some(&a));
    }

    #[test]
    fn shorter_wins_on_equal_score_and_sum() {
        let p = power(0.0);
        let short = Hypothesis::from_parts(vec![BOS, B, EOS], -1.0, EOS, &p);
        let long = Hypothesis::from_parts(vec![BOS, A, A, EOS], -1.0, EOS, &p);
        assert_eq!(canonical_cmp(&short, &long), Ordering::Less);
    }
}
