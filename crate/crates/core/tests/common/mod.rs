#![allow(dead_code)]

use std::path::{Path, PathBuf};

use beamkit_core::models::{random_tabular, RandomModelSpec, TabularModel};
use beamkit_core::{DecoderConfig, PenaltyStyle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn tabular(json: &str) -> TabularModel {
    TabularModel::from_json_str(json, Path::new("inline.json")).expect("fixture parses")
}

/// A random unconstrained small instance: |V| in 3..=6, M in 3..=8, k in 1..=4.
pub fn random_case(seed: u64) -> (TabularModel, DecoderConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let spec = RandomModelSpec {
        vocab_size: rng.random_range(3..=6),
        order: rng.random_range(1..=2),
        eos_floor: None,
        inputs: Vec::new(),
    };
    let model = random_tabular(&spec, seed).unwrap();
    let config = DecoderConfig {
        beam_size: rng.random_range(1..=4),
        max_length: rng.random_range(3..=8),
        length_penalty: [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)],
        penalty_style: if rng.random_bool(0.5) {
            PenaltyStyle::Power
        } else {
            PenaltyStyle::Gnmt
        },
        ..DecoderConfig::default()
    };
    (model, config)
}

/// Same as [`random_case`] but with constraints switched on at random.
pub fn random_constrained_case(seed: u64) -> (TabularModel, DecoderConfig) {
    let (model, mut config) = random_case(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0de);
    config.min_length = rng.random_range(0..config.max_length - 1);
    config.no_repeat_ngram_size = rng.random_range(0..=3);
    (model, config)
}

pub fn unigram_random(vocab_size: usize, seed: u64) -> TabularModel {
    let spec = RandomModelSpec {
        vocab_size,
        order: 1,
        eos_floor: None,
        inputs: Vec::new(),
    };
    random_tabular(&spec, seed).unwrap()
}
