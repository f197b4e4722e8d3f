use serde::Serialize;

use crate::decode::Algorithm;
use crate::error::DecodeError;
use crate::models::ScorerModel;
use crate::types::{DecodeResult, DecoderConfig};

/// A labelled (algorithm, configuration) pair.
#[derive(Debug, Clone)]
pub struct Variant {
    pub label: String,
    pub algorithm: Algorithm,
    pub config: DecoderConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub mean_best_score: f64,
    /// Generated tokens, EOS included.
    pub mean_output_length: f64,
    pub mean_steps: f64,
    /// Inputs whose best token sequence differs from the baseline variant's.
    pub differing_outputs: usize,
}

fn run_all<M: ScorerModel + ?Sized>(
    model: &M,
    inputs: &[Option<String>],
    v: &Variant,
) -> Result<Vec<DecodeResult>, DecodeError> {
    inputs
        .iter()
        .map(|i| v.algorithm.decode(model, i.as_deref(), &v.config))
        .collect()
}

/// Runs every variant on every input and counts disagreements with `variants[baseline]`.
pub fn compare_variants<M: ScorerModel + ?Sized>(
    model: &M,
    inputs: &[Option<String>],
    variants: &[Variant],
    baseline: usize,
) -> Result<Vec<ComparisonRow>, DecodeError> {
    let results = variants
        .iter()
        .map(|v| run_all(model, inputs, v))
        .collect::<Result<Vec<_>, _>>()?;
    let base = &results[baseline];
    let n = inputs.len().max(1) as f64;
    Ok(variants
        .iter()
        .zip(&results)
        .map(|(v, rs)| ComparisonRow {
            label: v.label.clone(),
            mean_best_score: rs.iter().map(|r| r.best.score()).sum::<f64>() / n,
            mean_output_length: rs
                .iter()
                .map(|r| r.best.generated_len() as f64)
                .sum::<f64>()
                / n,
            mean_steps: rs
                .iter()
                .map(|r| r.stats.steps_executed as f64)
                .sum::<f64>()
                / n,
            differing_outputs: rs
                .iter()
                .zip(base)
                .filter(|(a, b)| a.best.tokens() != b.best.tokens())
                .count(),
        })
        .collect())
}

/// Greedy, vanilla, FCFS (`p = 1`) and FCFS with `config.patience`, with
/// disagreements counted against FCFS at `p = 1`.
pub fn compare_algorithms<M: ScorerModel + ?Sized>(
    model: &M,
    inputs: &[Option<String>],
    config: &DecoderConfig,
) -> Result<Vec<ComparisonRow>, DecodeError> {
    let classic = DecoderConfig {
        patience: 1.0,
        ..config.clone()
    };
    let variants = [
        Variant {
            label: "greedy".into(),
            algorithm: Algorithm::Greedy,
            config: config.clone(),
        },
        Variant {
            label: "vanilla".into(),
            algorithm: Algorithm::Vanilla,
            config: config.clone(),
        },
        Variant {
            label: "fcfs".into(),
            algorithm: Algorithm::Fcfs,
            config: classic,
        },
        Variant {
            label: format!("fcfs_p{}", config.patience),
            algorithm: Algorithm::Fcfs,
            config: config.clone(),
        },
    ];
    compare_variants(model, inputs, &variants, 2)
}
