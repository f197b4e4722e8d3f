mod common;

use beamkit_core::bench::{
    compare_algorithms, compare_variants, run_sweep, run_sweep_with_model, ModelSource, SweepAxis,
    SweepSpec, Variant,
};
use beamkit_core::decode::{fcfs_beam, Algorithm};
use beamkit_core::models::{RandomModelSpec, TabularModel};
use beamkit_core::oracle::exhaustive_best;
use beamkit_core::{DecoderConfig, SweepError};
use common::data;

fn random_source(seed: u64, inputs: usize) -> ModelSource {
    ModelSource::Random {
        spec: RandomModelSpec {
            vocab_size: 5,
            order: 2,
            eos_floor: None,
            inputs: (0..inputs).map(|i| format!("in{i}")).collect(),
        },
        seed,
    }
}

fn spec(axis: SweepAxis, values: &[f64], seed: u64) -> SweepSpec {
    SweepSpec {
        model: random_source(seed, 6),
        base_config: DecoderConfig {
            beam_size: 3,
            max_length: 10,
            ..Default::default()
        },
        axis,
        values: values.to_vec(),
        inputs: (0..6).map(|i| format!("in{i}")).collect(),
        repetitions: 1,
    }
}

#[test]
fn patience_sweep_steps_never_decrease_per_cell() {
    for seed in 0..10 {
        let report = run_sweep(&spec(SweepAxis::Patience, &[0.5, 1.0, 2.0], seed)).unwrap();
        assert_eq!(report.rows.len(), 3);
        for w in report.rows.windows(2) {
            assert!(w[1].mean_steps >= w[0].mean_steps);
        }
        for i in 0..6 {
            let key = format!("in{i}");
            let cells = report.cells_for(Some(&key));
            for w in cells.windows(2) {
                assert!(w[1].fcfs.steps >= w[0].fcfs.steps, "seed {seed} {key}");
            }
        }
    }
}

#[test]
fn unit_beam_sweep_fcfs_column_equals_greedy() {
    let mut s = spec(SweepAxis::BeamSize, &[1.0], 3);
    s.base_config.patience = 1.0;
    let report = run_sweep(&s).unwrap();
    for c in &report.cells {
        assert_eq!(c.fcfs.best_score, c.greedy.best_score);
    }
    assert_eq!(
        report.rows[0].mean_best_score,
        report.rows[0].greedy_mean_best_score
    );
}

#[test]
fn degenerate_sweep_matches_direct_call() {
    let mut s = spec(SweepAxis::LengthPenalty, &[0.5], 4);
    s.inputs = vec!["in2".into()];
    let report = run_sweep(&s).unwrap();
    assert_eq!(report.rows.len(), 1);
    let model = s.model.load().unwrap();
    let cfg = DecoderConfig {
        length_penalty: 0.5,
        ..s.base_config.clone()
    };
    let direct = fcfs_beam(model.as_ref(), Some("in2"), &cfg).unwrap();
    let row = &report.rows[0];
    assert_eq!(row.mean_steps, direct.stats.steps_executed as f64);
    assert_eq!(
        row.mean_candidates_scored,
        direct.stats.candidates_scored as f64
    );
    assert_eq!(row.mean_best_score, direct.best.score());
}

#[test]
fn csv_is_deterministic_without_timing() {
    let s = SweepSpec {
        repetitions: 2,
        ..spec(SweepAxis::Patience, &[0.5, 1.0, 1.5], 5)
    };
    let a = run_sweep(&s).unwrap();
    let b = run_sweep(&s).unwrap();
    assert_eq!(a.to_csv(false), b.to_csv(false));
    let csv = a.to_csv(true);
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("patience,mean_steps,"));
    assert!(header.ends_with(",rel_time_vs_vanilla"));
    assert_eq!(lines.count(), 3);
    assert!(!a.to_csv(false).contains("rel_time"));
}

#[test]
fn sweep_spec_validation() {
    let bad = |values: &[f64], axis| run_sweep(&spec(axis, values, 0)).unwrap_err();
    assert!(matches!(bad(&[], SweepAxis::Patience), SweepError::Spec(_)));
    assert!(matches!(
        bad(&[1.0, 1.0], SweepAxis::Patience),
        SweepError::Spec(_)
    ));
    assert!(matches!(
        bad(&[2.0, 1.0], SweepAxis::Patience),
        SweepError::Spec(_)
    ));
    assert!(matches!(
        bad(&[1.5], SweepAxis::BeamSize),
        SweepError::Spec(_)
    ));
    assert!(matches!(
        bad(&[0.0], SweepAxis::Patience),
        SweepError::Spec(_)
    ));
    let mut s = spec(SweepAxis::Patience, &[1.0], 0);
    s.repetitions = 0;
    assert!(run_sweep(&s).is_err());
}

#[test]
fn sweep_reports_failing_input() {
    let m = common::tabular(
        r#"{"order":1,"vocab":["<s>","</s>","a"],"bos":"<s>","eos":"</s>",
            "rows":{"<s>":{"a":1.0}}}"#,
    );
    let mut s = spec(SweepAxis::Patience, &[1.0], 0);
    s.inputs = vec!["doc-9".into()];
    let err = run_sweep_with_model(&s, &m).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("doc-9") && msg.contains("patience=1"), "{msg}");
}

#[test]
fn sweep_spec_json_shape() {
    let text = r#"{
        "model": {"random": {"vocab_size": 4, "order": 1, "seed": 9}},
        "base_config": {"beam_size": 2, "max_length": 6},
        "axis": "patience",
        "values": [0.5, 1, 2],
        "inputs": []
    }"#;
    let s: SweepSpec = serde_json::from_str(text).unwrap();
    assert_eq!(s.repetitions, 1);
    assert_eq!(s.axis, SweepAxis::Patience);
    let r = run_sweep(&s).unwrap();
    assert_eq!(r.rows.len(), 3);
    assert_eq!(r.cells.len(), 3);
    let tab: SweepSpec = serde_json::from_str(
        r#"{"model": {"tabular": "m.json"}, "axis": "beam_size", "values": [1, 2]}"#,
    )
    .unwrap();
    assert!(matches!(tab.model, ModelSource::Tabular(_)));
}

#[test]
fn self_comparison_has_no_differences() {
    let m = beamkit_core::models::random_tabular(
        &RandomModelSpec {
            vocab_size: 5,
            order: 2,
            inputs: vec!["a".into(), "b".into()],
            ..Default::default()
        },
        2,
    )
    .unwrap();
    let cfg = DecoderConfig {
        max_length: 8,
        ..Default::default()
    };
    let v = Variant {
        label: "fcfs".into(),
        algorithm: Algorithm::Fcfs,
        config: cfg,
    };
    let inputs = [Some("a".to_string()), Some("b".to_string()), None];
    let rows = compare_variants(&m, &inputs, &[v.clone(), v], 0).unwrap();
    assert!(rows.iter().all(|r| r.differing_outputs == 0));
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn witness_model_shows_vanilla_fcfs_difference() {
    let m = TabularModel::load(data("divergence_witness.json")).unwrap();
    let cfg = DecoderConfig {
        beam_size: 2,
        patience: 2.0,
        max_length: 6,
        length_penalty: 0.0,
        ..Default::default()
    };
    let rows = compare_algorithms(&m, &[None], &cfg).unwrap();
    let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["greedy", "vanilla", "fcfs", "fcfs_p2"]);
    assert!(rows[1].differing_outputs >= 1);
    assert_eq!(rows[2].differing_outputs, 0);
}

#[test]
fn greedy_never_beats_exhaustive_vanilla() {
    for seed in 0..50 {
        let m = common::unigram_random(4, 300 + seed);
        let cfg = DecoderConfig {
            beam_size: 256,
            max_length: 6,
            ..Default::default()
        };
        let rows = compare_algorithms(&m, &[None], &cfg).unwrap();
        assert!(rows[0].mean_best_score <= rows[1].mean_best_score + 1e-12);
        let o = exhaustive_best(&m, None, &cfg).unwrap();
        assert!((rows[1].mean_best_score - o.best.score()).abs() < 1e-9);
    }
}
