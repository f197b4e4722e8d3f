use crate::types::{DecoderConfig, TokenId, MASKED_LOGPROB};

/// Tokens that would complete an `n`-gram already present in `prefix`.
pub fn banned_ngram_tokens(prefix: &[TokenId], n: usize) -> Vec<TokenId> {
    if n == 0 || prefix.len() < n {
        return Vec::new();
    }
    let tail = &prefix[prefix.len() - (n - 1)..];
    let mut banned: Vec<TokenId> = prefix
        .windows(n)
        .filter(|w| &w[..n - 1] == tail)
        .map(|w| w[n - 1])
        .collect();
    banned.sort_unstable();
    banned.dedup();
    banned
}

/// Masks forbidden next tokens for `prefix` (which starts at BOS and is unfinished).
///
/// - EOS while fewer than `min_length` tokens have been generated.
/// - Any token that would repeat an `no_repeat_ngram_size`-gram.
/// - Everything but EOS at the last expandable position (`max_length - 2` generated
///   tokens), so every live hypothesis can still finish within `max_length`.
pub fn apply_constraints(
    mut logprobs: Vec<f64>,
    prefix: &[TokenId],
    eos: TokenId,
    config: &DecoderConfig,
) -> Vec<f64> {
    let generated = prefix.len() - 1;
    if generated < config.min_length {
        logprobs[eos.index()] = MASKED_LOGPROB;
    }
    for tok in banned_ngram_tokens(prefix, config.no_repeat_ngram_size) {
        logprobs[tok.index()] = MASKED_LOGPROB;
    }
    if generated + 2 >= config.max_length {
        for (i, lp) in logprobs.iter_mut().enumerate() {
            if i != eos.index() {
                *lp = MASKED_LOGPROB;
            }
        }
    }
    logprobs
}

/// True when `tokens` contain some `n`-gram twice.
pub fn has_repeated_ngram(tokens: &[TokenId], n: usize) -> bool {
    if n == 0 || tokens.len() < n {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    tokens.windows(n).any(|w| !seen.insert(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOS: TokenId = TokenId(0);
    const EOS: TokenId = TokenId(1);
    const A: TokenId = TokenId(2);
    const B: TokenId = TokenId(3);

    fn cfg(min_length: usize, ngram: usize, max_length: usize) -> DecoderConfig {
        DecoderConfig {
            min_length,
            no_repeat_ngram_size: ngram,
            max_length,
            ..Default::default()
        }
    }

    #[test]
    fn min_length_masks_eos() {
        let lp = vec![MASKED_LOGPROB, -1.0, -1.0, -1.0];
        let out = apply_constraints(lp.clone(), &[BOS, A], EOS, &cfg(2, 0, 10));
        assert_eq!(out[EOS.index()], MASKED_LOGPROB);
        assert_eq!(out[A.index()], -1.0);
        let out = apply_constraints(lp, &[BOS, A, B], EOS, &cfg(2, 0, 10));
        assert_eq!(out[EOS.index()], -1.0);
    }

    #[test]
    fn repeated_bigram_masked() {
        let lp = vec![MASKED_LOGPROB, -1.0, -1.0, -1.0];
        let out = apply_constraints(lp, &[BOS, A, B, A], EOS, &cfg(0, 2, 10));
        assert_eq!(out[B.index()], MASKED_LOGPROB);
        assert_eq!(out[A.index()], -1.0);
        assert_eq!(out[EOS.index()], -1.0);
    }

    #[test]
    fn last_position_forces_eos() {
        let lp = vec![MASKED_LOGPROB, -3.0, -0.1, -0.2];
        // max_length 4: generated 2 == M - 2
        let out = apply_constraints(lp.clone(), &[BOS, A, B], EOS, &cfg(0, 0, 4));
        assert_eq!(
            out,
            vec![MASKED_LOGPROB, -3.0, MASKED_LOGPROB, MASKED_LOGPROB]
        );
        let out = apply_constraints(lp.clone(), &[BOS, A], EOS, &cfg(0, 0, 4));
        assert_eq!(out, lp);
    }

    #[test]
    fn ngram_helpers() {
        assert_eq!(banned_ngram_tokens(&[BOS, A, A], 1), vec![BOS, A]);
        assert_eq!(banned_ngram_tokens(&[BOS, A, B, A, B], 3), vec![A]);
        assert!(banned_ngram_tokens(&[BOS, A], 3).is_empty());
        assert!(has_repeated_ngram(&[BOS, A, B, A, B], 2));
        assert!(!has_repeated_ngram(&[BOS, A, B, B, A], 2));
        assert!(!has_repeated_ngram(&[BOS, A, A], 0));
    }
}
