use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tabular::{Fallback, TabularModel};
use crate::error::ModelError;
use crate::types::{TokenId, Vocabulary};

/// Parameters for a seeded random tabular model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomModelSpec {
    /// Total vocabulary size including BOS and EOS.
    pub vocab_size: usize,
    pub order: usize,
    /// Lower bound on P(EOS) in every row.
    pub eos_floor: Option<f64>,
    /// Input keys that get their own independently drawn tables.
    pub inputs: Vec<String>,
}

impl Default for RandomModelSpec {
    fn default() -> Self {
        Self {
            vocab_size: 4,
            order: 1,
            eos_floor: None,
            inputs: Vec::new(),
        }
    }
}

/// Every reachable context of length `order`: BOS may only occur as left padding.
fn contexts(vocab: &Vocabulary, order: usize) -> Vec<Vec<TokenId>> {
    let content: Vec<TokenId> = vocab
        .ids()
        .filter(|&t| t != vocab.bos() && t != vocab.eos())
        .collect();
    let mut out = Vec::new();
    for pad in (0..=order).rev() {
        let free = order - pad;
        let mut idx = vec![0usize; free];
        loop {
            if free > 0 && content.is_empty() {
                break;
            }
            let mut ctx = vec![vocab.bos(); pad];
            ctx.extend(idx.iter().map(|&i| content[i]));
            out.push(ctx);
            // odometer
            let mut pos = free;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < content.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out
}

fn draw_row(rng: &mut ChaCha8Rng, vocab: &Vocabulary, eos_floor: Option<f64>) -> Vec<f64> {
    let mut probs = vec![0.0; vocab.len()];
    let mut total = 0.0;
    for id in vocab.continuations() {
        // Exp(1) weights give a flat Dirichlet draw.
        let u: f64 = rng.random();
        let w = -(1.0 - u).ln() + 1e-3;
        probs[id.index()] = w;
        total += w;
    }
    for p in &mut probs {
        *p /= total;
    }
    if let Some(floor) = eos_floor {
        let eos = vocab.eos().index();
        for (i, p) in probs.iter_mut().enumerate() {
            if i == eos {
                *p = floor + (1.0 - floor) * *p;
            } else {
                *p *= 1.0 - floor;
            }
        }
    }
    probs
}

/// Content tokens are named `t0`, `t1`, ...
pub fn random_tabular(spec: &RandomModelSpec, seed: u64) -> Result<TabularModel, ModelError> {
    if spec.vocab_size < 3 {
        return Err(ModelError::Parameter(
            "random models need vocab_size >= 3 (BOS, EOS, one content token)".into(),
        ));
    }
    if let Some(f) = spec.eos_floor {
        if !(0.0..1.0).contains(&f) {
            return Err(ModelError::Parameter(format!(
                "eos_floor must be in [0, 1), got {f}"
            )));
        }
    }
    let names: Vec<String> = (0..spec.vocab_size - 2).map(|i| format!("t{i}")).collect();
    let vocab = Vocabulary::with_content(&names)?;
    let mut model = TabularModel::new(vocab.clone(), spec.order, Fallback::Error)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctxs = contexts(&vocab, spec.order);
    for ctx in &ctxs {
        let row = draw_row(&mut rng, &vocab, spec.eos_floor);
        model.insert_row(None, ctx.clone(), row);
    }
    for input in &spec.inputs {
        for ctx in &ctxs {
            let row = draw_row(&mut rng, &vocab, spec.eos_floor);
            model.insert_row(Some(input), ctx.clone(), row);
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ScorerModel;

    #[test]
    fn context_enumeration() {
        let v = Vocabulary::with_content(&["a", "b"]).unwrap();
        assert_eq!(contexts(&v, 1).len(), 3);
        // BOS BOS, BOS x (2), x y (4)
        assert_eq!(contexts(&v, 2).len(), 7);
    }

    #[test]
    fn seeded_models_are_valid_and_reproducible() {
        let spec = RandomModelSpec {
            vocab_size: 5,
            order: 2,
            eos_floor: Some(0.2),
            inputs: vec!["x".into()],
        };
        let a = random_tabular(&spec, 7).unwrap();
        let b = random_tabular(&spec, 7).unwrap();
        let c = random_tabular(&spec, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.violations().is_empty());
        let v = a.vocabulary();
        for ctx in contexts(v, 2) {
            let row = a.row(Some("x"), &ctx).unwrap();
            assert!(row[v.eos().index()] >= 0.2);
        }
    }
}
