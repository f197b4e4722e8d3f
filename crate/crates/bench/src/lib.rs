//! Shared fixtures for the criterion benchmarks.

use beamkit_core::models::{random_tabular, RandomModelSpec, TabularModel};
use beamkit_core::DecoderConfig;

/// Bigram model over `vocab_size` tokens with a guaranteed EOS floor.
pub fn bench_model(vocab_size: usize, seed: u64) -> TabularModel {
    let spec = RandomModelSpec {
        vocab_size,
        order: 2,
        eos_floor: Some(0.05),
        inputs: Vec::new(),
    };
    random_tabular(&spec, seed).expect("valid random model spec")
}

pub fn bench_config(beam_size: usize, patience: f64) -> DecoderConfig {
    DecoderConfig {
        beam_size,
        patience,
        max_length: 32,
        ..DecoderConfig::default()
    }
}
