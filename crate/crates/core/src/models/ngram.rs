use std::collections::{BTreeMap, HashMap};

use super::{check_row, padded_context, to_logprobs, ScorerModel, Violation};
use crate::error::ModelError;
use crate::types::{TokenId, Vocabulary, DEFAULT_BOS, DEFAULT_EOS};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ContextCounts {
    total: u64,
    next: BTreeMap<TokenId, u64>,
}

/// Additively smoothed n-gram model with recursive backoff on unseen contexts.
///
/// `P(w | h) = (c(h, w) + delta) / (c(h) + delta * (|V| - 1))`, where the `- 1` drops BOS.
/// When `h` was never observed the longest observed suffix of `h` is used, down to the
/// unigram distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    vocab: Vocabulary,
    order: usize,
    delta: f64,
    /// `counts[m]` holds contexts of length `m`.
    counts: Vec<HashMap<Vec<TokenId>, ContextCounts>>,
}

/// Counts n-grams over `corpus`. EOS is appended to sequences that lack it.
pub fn train_ngram(
    vocab: &Vocabulary,
    corpus: &[Vec<TokenId>],
    order: usize,
    delta: f64,
) -> Result<NGramModel, ModelError> {
    if order == 0 {
        return Err(ModelError::Parameter("n-gram order must be >= 1".into()));
    }
    if delta.is_nan() || delta <= 0.0 || delta.is_infinite() {
        return Err(ModelError::Parameter(format!(
            "smoothing constant must be > 0, got {delta}"
        )));
    }
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let (bos, eos) = (vocab.bos(), vocab.eos());
    let mut counts = vec![HashMap::<Vec<TokenId>, ContextCounts>::new(); order];
    for (line, seq) in corpus.iter().enumerate() {
        let bad = |message: String| ModelError::Corpus {
            line: line + 1,
            message,
        };
        if seq.is_empty() {
            return Err(bad("empty sequence".into()));
        }
        let mut padded = vec![bos; order - 1];
        for (i, &tok) in seq.iter().enumerate() {
            if !vocab.contains(tok) {
                return Err(bad(format!("token id {} outside vocabulary", tok.0)));
            }
            if tok == bos {
                return Err(bad("BOS inside a training sequence".into()));
            }
            if tok == eos && i + 1 != seq.len() {
                return Err(bad("EOS before the end of a training sequence".into()));
            }
            padded.push(tok);
        }
        if *padded.last().unwrap() != eos {
            padded.push(eos);
        }
        for pos in order - 1..padded.len() {
            let target = padded[pos];
            for (m, table) in counts.iter_mut().enumerate() {
                let entry = table.entry(padded[pos - m..pos].to_vec()).or_default();
                entry.total += 1;
                *entry.next.entry(target).or_default() += 1;
            }
        }
    }
    Ok(NGramModel {
        vocab: vocab.clone(),
        order,
        delta,
        counts,
    })
}

impl NGramModel {
    /// Builds a vocabulary from whitespace-tokenized lines (first appearance order,
    /// after `<s>` and `</s>`) and trains on them. Blank lines are skipped.
    pub fn from_corpus_text(text: &str, order: usize, delta: f64) -> Result<Self, ModelError> {
        let mut words: Vec<&str> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut lines = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            for &t in &toks {
                if t == DEFAULT_BOS {
                    return Err(ModelError::Corpus {
                        line: n + 1,
                        message: format!("reserved token `{t}`"),
                    });
                }
                if t != DEFAULT_EOS && seen.insert(t) {
                    words.push(t);
                }
            }
            lines.push((n + 1, toks));
        }
        let vocab = Vocabulary::with_content(&words)?;
        let corpus = lines
            .iter()
            .map(|(n, toks)| {
                vocab.lookup_all(toks).map_err(|e| ModelError::Corpus {
                    line: *n,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        train_ngram(&vocab, &corpus, order, delta)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Longest observed suffix of the padded context, with its counts.
    fn backoff(&self, prefix: &[TokenId]) -> (&[TokenId], &ContextCounts) {
        let full = padded_context(prefix, self.order - 1, self.vocab.bos());
        for m in (0..self.order).rev() {
            let ctx = &full[full.len() - m..];
            if let Some((k, c)) = self.counts[m].get_key_value(ctx) {
                if c.total > 0 {
                    return (k.as_slice(), c);
                }
            }
        }
        unreachable!("unigram counts exist for any non-empty corpus")
    }

    fn distribution(&self, counts: &ContextCounts) -> Vec<f64> {
        let denom = counts.total as f64 + self.delta * (self.vocab.len() - 1) as f64;
        let mut probs: Vec<f64> = self
            .vocab
            .ids()
            .map(|id| {
                let c = counts.next.get(&id).copied().unwrap_or(0) as f64;
                (c + self.delta) / denom
            })
            .collect();
        probs[self.vocab.bos().index()] = 0.0;
        probs
    }

    /// Smoothed probabilities after `prefix`, one per token id.
    pub fn probabilities(&self, prefix: &[TokenId]) -> Vec<f64> {
        let (_, counts) = self.backoff(prefix);
        self.distribution(counts)
    }
}

impl ScorerModel for NGramModel {
    fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    fn next_logprobs(
        &self,
        _input: Option<&str>,
        prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError> {
        Ok(to_logprobs(&self.vocab, &self.probabilities(prefix)))
    }

    fn violations(&self) -> Vec<Violation> {
        let mut keys: Vec<&Vec<TokenId>> = self.counts.iter().flat_map(|t| t.keys()).collect();
        keys.sort();
        keys.into_iter()
            .flat_map(|ctx| {
                let counts = &self.counts[ctx.len()][ctx];
                check_row(
                    &self.vocab,
                    None,
                    &self.vocab.join(ctx),
                    &self.distribution(counts),
                )
            })
            .collect()
    }
}
