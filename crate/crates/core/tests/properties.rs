use std::cmp::Ordering;

use beamkit_core::{
    canonical_cmp, normalized_score, Hypothesis, LengthPenalty, PenaltyStyle, TokenId,
};
use proptest::prelude::*;

const BOS: TokenId = TokenId(0);
const EOS: TokenId = TokenId(1);

fn hyp_strategy() -> impl Strategy<Value = (Vec<u32>, Vec<f64>)> {
    // small alphabet and coarse log-probs so ties actually happen
    (1usize..5).prop_flat_map(|n| {
        (
            prop::collection::vec(2u32..4, n),
            prop::collection::vec(prop::sample::select(vec![-0.5, -1.0, -0.25]), n),
        )
    })
}

fn build((toks, lps): (Vec<u32>, Vec<f64>), penalty: &LengthPenalty) -> Hypothesis {
    let mut h = Hypothesis::bos(BOS);
    for (t, lp) in toks.into_iter().zip(lps) {
        h = h.extend(TokenId(t), lp, EOS, penalty);
    }
    h
}

fn power(alpha: f64) -> LengthPenalty {
    LengthPenalty::new(alpha, PenaltyStyle::Power)
}

proptest! {
    #[test]
    fn canonical_order_is_total(a in hyp_strategy(), b in hyp_strategy(), c in hyp_strategy()) {
        let p = power(1.0);
        let (a, b, c) = (build(a, &p), build(b, &p), build(c, &p));
        prop_assert_eq!(canonical_cmp(&a, &b), canonical_cmp(&b, &a).reverse());
        prop_assert_eq!(canonical_cmp(&a, &a), Ordering::Equal);
        if canonical_cmp(&a, &b) != Ordering::Greater && canonical_cmp(&b, &c) != Ordering::Greater {
            prop_assert_ne!(canonical_cmp(&a, &c), Ordering::Greater);
        }
        if canonical_cmp(&a, &b) == Ordering::Equal {
            prop_assert_eq!(a.tokens(), b.tokens());
        }
    }

    #[test]
    fn equal_length_order_ignores_alpha(
        toks_a in prop::collection::vec(2u32..5, 3),
        toks_b in prop::collection::vec(2u32..5, 3),
        lps_a in prop::collection::vec(-3.0f64..-0.01, 3),
        lps_b in prop::collection::vec(-3.0f64..-0.01, 3),
        gnmt in any::<bool>(),
    ) {
        let style = if gnmt { PenaltyStyle::Gnmt } else { PenaltyStyle::Power };
        let order_at = |alpha| {
            let p = LengthPenalty::new(alpha, style);
            let a = build((toks_a.clone(), lps_a.clone()), &p);
            let b = build((toks_b.clone(), lps_b.clone()), &p);
            canonical_cmp(&a, &b)
        };
        let reference = order_at(0.0);
        for alpha in [0.5, 1.0, 2.0] {
            prop_assert_eq!(order_at(alpha), reference);
        }
    }

    #[test]
    fn normalized_score_decreases_with_magnitude(
        x in 0.0f64..50.0, dx in 1e-6f64..10.0, len in 1usize..40, alpha in -1.0f64..3.0
    ) {
        for p in [LengthPenalty::new(alpha, PenaltyStyle::Power), LengthPenalty::new(alpha, PenaltyStyle::Gnmt)] {
            prop_assert!(normalized_score(-(x + dx), len, &p) < normalized_score(-x, len, &p));
        }
    }

    #[test]
    fn extension_accumulates_and_never_mutates(
        toks in prop::collection::vec(1u32..6, 1..12),
        lps in prop::collection::vec(-20.0f64..0.0, 12),
    ) {
        let p = power(1.0);
        let mut h = Hypothesis::bos(BOS);
        let mut sum = 0.0;
        for (&t, &lp) in toks.iter().zip(&lps) {
            if h.is_finished() { break; }
            let before = h.clone();
            let next = h.extend(TokenId(t), lp, EOS, &p);
            prop_assert_eq!(&h, &before);
            sum += lp;
            prop_assert!((next.sum_logprob() - sum).abs() < 1e-12);
            prop_assert_eq!(next.is_finished(), TokenId(t) == EOS);
            h = next;
        }
    }
}
