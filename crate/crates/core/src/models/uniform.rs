use super::ScorerModel;
use crate::error::ModelError;
use crate::types::{TokenId, Vocabulary, MASKED_LOGPROB};

/// Equal probability for every non-BOS token, regardless of prefix.
#[derive(Debug, Clone)]
pub struct UniformModel {
    vocab: Vocabulary,
}

impl UniformModel {
    pub fn new(vocab: Vocabulary) -> Self {
        Self { vocab }
    }
}

pub(crate) fn uniform_logprobs(vocab: &Vocabulary) -> Vec<f64> {
    let lp = -((vocab.len() - 1) as f64).ln();
    let mut out = vec![lp; vocab.len()];
    out[vocab.bos().index()] = MASKED_LOGPROB;
    out
}

impl ScorerModel for UniformModel {
    fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    fn next_logprobs(
        &self,
        _input: Option<&str>,
        _prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError> {
        Ok(uniform_logprobs(&self.vocab))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_equal_entries_and_masked_bos() {
        let v = Vocabulary::with_content(&["a", "b"]).unwrap();
        let m = UniformModel::new(v.clone());
        let lp = m.next_logprobs(None, &[v.bos()]).unwrap();
        assert_eq!(lp.len(), 4);
        assert_eq!(lp[v.bos().index()], MASKED_LOGPROB);
        for id in v.continuations() {
            assert_eq!(lp[id.index()], (1.0f64 / 3.0).ln());
        }
        assert!((super::super::unmasked_mass(&lp) - 1.0).abs() < 1e-12);
    }
}
