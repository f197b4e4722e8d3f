use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::uniform::uniform_logprobs;
use super::{check_row, padded_context, to_logprobs, ScorerModel, Violation};
use crate::error::ModelError;
use crate::types::{TokenId, Vocabulary};

/// What to do when the prefix context has no stored row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    Uniform,
    #[default]
    Error,
}

/// On-disk JSON layout of a tabular model.
///
/// `rows` maps a context key (the `order` context tokens joined by single spaces,
/// BOS-padded on the left) to a sparse `{token: probability}` row; missing tokens
/// have probability zero. `inputs` optionally holds per-input tables keyed by an
/// input key; inputs without their own table use `rows`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularFile {
    pub order: usize,
    pub vocab: Vec<String>,
    pub bos: String,
    pub eos: String,
    #[serde(default)]
    pub fallback: Fallback,
    pub rows: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    probs: Vec<f64>,
    logprobs: Vec<f64>,
}

type Table = BTreeMap<Vec<TokenId>, Row>;

/// Fixed-order lookup table of next-token distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularModel {
    vocab: Vocabulary,
    order: usize,
    fallback: Fallback,
    rows: Table,
    inputs: BTreeMap<String, Table>,
}

impl TabularModel {
    pub fn new(vocab: Vocabulary, order: usize, fallback: Fallback) -> Result<Self, ModelError> {
        if order == 0 {
            return Err(ModelError::Parameter("tabular order must be >= 1".into()));
        }
        Ok(Self {
            vocab,
            order,
            fallback,
            rows: Table::new(),
            inputs: BTreeMap::new(),
        })
    }

    /// Stores a dense probability row (one entry per token id). Not validated here.
    pub fn insert_row(&mut self, input: Option<&str>, context: Vec<TokenId>, probs: Vec<f64>) {
        assert_eq!(context.len(), self.order, "context length must equal order");
        assert_eq!(
            probs.len(),
            self.vocab.len(),
            "row length must equal vocabulary size"
        );
        let row = Row {
            logprobs: to_logprobs(&self.vocab, &probs),
            probs,
        };
        let table = match input {
            None => &mut self.rows,
            Some(key) => self.inputs.entry(key.to_string()).or_default(),
        };
        table.insert(context, row);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn fallback(&self) -> Fallback {
        self.fallback
    }

    pub fn input_keys(&self) -> impl Iterator<Item = &str> {
        self.inputs.keys().map(String::as_str)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len() + self.inputs.values().map(BTreeMap::len).sum::<usize>()
    }

    /// Dense probability row for a context, if stored.
    pub fn row(&self, input: Option<&str>, context: &[TokenId]) -> Option<&[f64]> {
        self.table_for(input)
            .get(context)
            .map(|r| r.probs.as_slice())
    }

    fn table_for(&self, input: Option<&str>) -> &Table {
        input.and_then(|k| self.inputs.get(k)).unwrap_or(&self.rows)
    }

    pub fn from_file(file: TabularFile) -> Result<Self, ModelError> {
        let vocab = Vocabulary::new(file.vocab, &file.bos, &file.eos)?;
        let mut model = TabularModel::new(vocab, file.order, file.fallback)?;
        for (ctx_key, row) in &file.rows {
            let (ctx, probs) = model.parse_row(None, ctx_key, row)?;
            model.insert_row(None, ctx, probs);
        }
        for (input, rows) in &file.inputs {
            for (ctx_key, row) in rows {
                let (ctx, probs) = model.parse_row(Some(input), ctx_key, row)?;
                model.insert_row(Some(input), ctx, probs);
            }
        }
        Ok(model)
    }

    fn parse_row(
        &self,
        input: Option<&str>,
        ctx_key: &str,
        row: &BTreeMap<String, f64>,
    ) -> Result<(Vec<TokenId>, Vec<f64>), ModelError> {
        let location = match input {
            Some(i) => format!("inputs.{i}.{ctx_key:?}"),
            None => format!("rows.{ctx_key:?}"),
        };
        let words: Vec<&str> = ctx_key.split_whitespace().collect();
        if words.len() != self.order {
            return Err(ModelError::Format {
                location,
                message: format!(
                    "context has {} tokens, model order is {}",
                    words.len(),
                    self.order
                ),
            });
        }
        let ctx = self
            .vocab
            .lookup_all(&words)
            .map_err(|e| ModelError::Format {
                location: location.clone(),
                message: e.to_string(),
            })?;
        if ctx.contains(&self.vocab.eos()) {
            return Err(ModelError::Format {
                location,
                message: "EOS cannot appear in a context".into(),
            });
        }
        let mut probs = vec![0.0; self.vocab.len()];
        for (tok, &p) in row {
            let id = self.vocab.id(tok).ok_or_else(|| ModelError::Format {
                location: format!("{location}.{tok}"),
                message: format!("unknown token `{tok}`"),
            })?;
            probs[id.index()] = p;
        }
        Ok((ctx, probs))
    }

    pub fn to_file(&self) -> TabularFile {
        let render_table = |table: &Table| {
            table
                .iter()
                .map(|(ctx, row)| {
                    let entries = row
                        .probs
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p != 0.0)
                        .map(|(i, &p)| (self.vocab.tokens()[i].clone(), p))
                        .collect();
                    (self.vocab.join(ctx), entries)
                })
                .collect()
        };
        TabularFile {
            order: self.order,
            vocab: self.vocab.tokens().to_vec(),
            bos: self.vocab.token(self.vocab.bos()).to_string(),
            eos: self.vocab.token(self.vocab.eos()).to_string(),
            fallback: self.fallback,
            rows: render_table(&self.rows),
            inputs: self
                .inputs
                .iter()
                .map(|(k, t)| (k.clone(), render_table(t)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("tabular model serializes")
    }

    /// Parses without normalization checks.
    pub fn from_json_str(text: &str, origin: &Path) -> Result<Self, ModelError> {
        let file: TabularFile = serde_json::from_str(text).map_err(|e| ModelError::Parse {
            path: origin.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(file)
    }

    /// Reads, parses and validates a model file. Any violation rejects the model.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let model = Self::from_json_str(&text, path)?;
        let violations = model.violations();
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl ScorerModel for TabularModel {
    fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    fn next_logprobs(
        &self,
        input: Option<&str>,
        prefix: &[TokenId],
    ) -> Result<Vec<f64>, ModelError> {
        let ctx = padded_context(prefix, self.order, self.vocab.bos());
        match self.table_for(input).get(&ctx) {
            Some(row) => Ok(row.logprobs.clone()),
            None => match self.fallback {
                Fallback::Uniform => Ok(uniform_logprobs(&self.vocab)),
                Fallback::Error => Err(ModelError::UnknownContext {
                    context: self.vocab.join(&ctx),
                    input: input.map(str::to_string),
                }),
            },
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (ctx, row) in &self.rows {
            out.extend(check_row(
                &self.vocab,
                None,
                &self.vocab.join(ctx),
                &row.probs,
            ));
        }
        for (input, table) in &self.inputs {
            for (ctx, row) in table {
                out.extend(check_row(
                    &self.vocab,
                    Some(input),
                    &self.vocab.join(ctx),
                    &row.probs,
                ));
            }
        }
        out
    }
}
