use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::VocabError;

/// Index of a token in a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenId(pub u32);

impl TokenId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Ordered set of distinct token strings with designated BOS and EOS symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, TokenId>,
    bos: TokenId,
    eos: TokenId,
}

impl Vocabulary {
    pub fn new(tokens: Vec<String>, bos: &str, eos: &str) -> Result<Self, VocabError> {
        if tokens.len() < 2 {
            return Err(VocabError::TooSmall(tokens.len()));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(VocabError::BadToken(tok.clone()));
            }
            if index.insert(tok.clone(), TokenId(i as u32)).is_some() {
                return Err(VocabError::Duplicate(tok.clone()));
            }
        }
        let bos = *index
            .get(bos)
            .ok_or_else(|| VocabError::MissingSpecial(bos.to_string()))?;
        let eos = *index
            .get(eos)
            .ok_or_else(|| VocabError::MissingSpecial(eos.to_string()))?;
        if bos == eos {
            return Err(VocabError::SameSpecial);
        }
        Ok(Self {
            tokens,
            index,
            bos,
            eos,
        })
    }

    /// Builds `<s>`, `</s>`, then the given content tokens in order.
    pub fn with_content<S: AsRef<str>>(content: &[S]) -> Result<Self, VocabError> {
        let mut tokens = vec![DEFAULT_BOS.to_string(), DEFAULT_EOS.to_string()];
        tokens.extend(content.iter().map(|s| s.as_ref().to_string()));
        Self::new(tokens, DEFAULT_BOS, DEFAULT_EOS)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn bos(&self) -> TokenId {
        self.bos
    }

    pub fn eos(&self) -> TokenId {
        self.eos
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, id: TokenId) -> bool {
        id.index() < self.tokens.len()
    }

    /// Panics on an out-of-range id.
    pub fn token(&self, id: TokenId) -> &str {
        &self.tokens[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = TokenId> + '_ {
        (0..self.tokens.len() as u32).map(TokenId)
    }

    /// Every id except BOS, in id order.
    pub fn continuations(&self) -> impl Iterator<Item = TokenId> + '_ {
        let bos = self.bos;
        self.ids().filter(move |&id| id != bos)
    }

    pub fn render(&self, ids: &[TokenId]) -> Vec<String> {
        ids.iter().map(|&id| self.token(id).to_string()).collect()
    }

    pub fn join(&self, ids: &[TokenId]) -> String {
        self.render(ids).join(" ")
    }

    pub fn lookup_all<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<TokenId>, VocabError> {
        words
            .iter()
            .map(|w| {
                self.id(w.as_ref())
                    .ok_or_else(|| VocabError::UnknownToken(w.as_ref().to_string()))
            })
            .collect()
    }
}

pub const DEFAULT_BOS: &str = "<s>";
pub const DEFAULT_EOS: &str = "</s>";
