mod common;

use beamkit_core::decode::{greedy_decode, Algorithm};
use beamkit_core::models::{ScorerModel, TabularModel};
use beamkit_core::oracle::{
    enumerate_finished, exhaustive_best, exhaustive_best_with, EnumerationOrder,
};
use beamkit_core::{DecoderConfig, OracleError};
use common::{data, random_constrained_case, tabular};

#[test]
fn hand_enumeration_on_three_token_model() {
    let m = TabularModel::load(data("three_token.json")).unwrap();
    let ln = f64::ln;
    // "</s>", "a </s>", "a a </s>" (the last forced at M = 4)
    let sums = [ln(0.3), ln(0.7) + ln(0.4), ln(0.7) + ln(0.6) + ln(0.4)];

    let cfg = DecoderConfig {
        max_length: 4,
        length_penalty: 1.0,
        ..Default::default()
    };
    let all = enumerate_finished(&m, None, &cfg, 100).unwrap();
    assert_eq!(all.entries.len(), 3);
    assert!(!all.truncated);
    let o = exhaustive_best(&m, None, &cfg).unwrap();
    assert_eq!(o.num_enumerated, 3);
    assert!(o.exhausted);
    assert_eq!(m.vocabulary().join(o.best.tokens()), "<s> a a </s>");
    assert!((o.best.score() - sums[2] / 3.0).abs() < 1e-12);

    let raw = DecoderConfig {
        length_penalty: 0.0,
        ..cfg
    };
    let o = exhaustive_best(&m, None, &raw).unwrap();
    assert_eq!(m.vocabulary().join(o.best.tokens()), "<s> </s>");
    assert!((o.best.score() - sums[0]).abs() < 1e-12);
}

#[test]
fn chain_model_oracle_is_greedy() {
    let m = tabular(
        r#"{"order":1,"vocab":["<s>","</s>","a","b"],"bos":"<s>","eos":"</s>",
            "rows":{"<s>":{"b":1.0},"b":{"a":1.0},"a":{"</s>":1.0}}}"#,
    );
    let cfg = DecoderConfig {
        max_length: 6,
        ..Default::default()
    };
    let o = exhaustive_best(&m, None, &cfg).unwrap();
    let g = greedy_decode(&m, None, &cfg).unwrap();
    assert_eq!(o.best, g.best);
    assert_eq!(o.num_enumerated, 1);
}

#[test]
fn limit_is_checked_up_front() {
    let m = common::unigram_random(4, 3);
    let cfg = DecoderConfig {
        max_length: 14,
        ..Default::default()
    };
    match exhaustive_best(&m, None, &cfg) {
        Err(OracleError::LimitExceeded { required, limit }) => {
            assert_eq!(required, 4u128.pow(12));
            assert_eq!(limit, 10_000_000);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn enumeration_truncates_and_accounts_for_mass() {
    let m = common::unigram_random(4, 5);
    let cfg = DecoderConfig {
        max_length: 7,
        ..Default::default()
    };
    let one = enumerate_finished(&m, None, &cfg, 1).unwrap();
    assert_eq!(one.entries.len(), 1);
    assert!(one.truncated);

    let all = enumerate_finished(&m, None, &cfg, usize::MAX).unwrap();
    assert!(!all.entries.is_empty());
    let finished: f64 = all.entries.iter().map(|(h, _)| h.sum_logprob().exp()).sum();
    assert!((finished + all.pruned_mass - 1.0).abs() < 1e-6);
    for (h, s) in &all.entries {
        assert_eq!(*s, cfg.rescore(h));
    }
    // depth-first, lowest id first: "</s>" (id 1) comes before anything starting with t0
    assert_eq!(m.vocabulary().join(all.entries[0].0.tokens()), "<s> </s>");
}

#[test]
fn search_order_does_not_change_the_answer() {
    for seed in 0..100 {
        let (m, cfg) = random_constrained_case(seed);
        let dfs = exhaustive_best_with(&m, None, &cfg, u128::MAX, EnumerationOrder::DepthFirst);
        let bfs = exhaustive_best_with(&m, None, &cfg, u128::MAX, EnumerationOrder::BreadthFirst);
        match (dfs, bfs) {
            (Ok(a), Ok(b)) => assert_eq!(a, b, "seed {seed}"),
            (Err(OracleError::NoFinished), Err(OracleError::NoFinished)) => {}
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

#[test]
fn oracle_dominates_every_decoder() {
    for seed in 0..200 {
        let (m, mut cfg) = random_constrained_case(seed);
        cfg.patience = 2.0;
        let Ok(o) = exhaustive_best(&m, None, &cfg) else {
            continue;
        };
        for alg in Algorithm::ALL {
            let r = alg.decode(&m, None, &cfg).unwrap();
            if r.best.is_finished() {
                assert!(
                    o.best.score() >= r.best.score() - 1e-12,
                    "{alg} seed {seed}"
                );
            }
        }
    }
}
