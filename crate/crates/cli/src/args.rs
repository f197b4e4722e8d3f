use std::path::PathBuf;

use beamkit_core::bench::SweepAxis;
use beamkit_core::decode::Algorithm;
use beamkit_core::{DecoderConfig, PenaltyStyle, Preset, SelectionMode};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "beamkit",
    version,
    about = "Beam search decoders over toy scoring models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode every input and print one JSON object per line.
    Decode(DecodeArgs),
    /// Sweep one decoder knob and print a CSV summary.
    Sweep(SweepArgs),
    /// Exhaustively search for the best finished sequence.
    Oracle(OracleArgs),
    /// Check a tabular model file for normalization problems.
    Validate(ValidateArgs),
    /// Write a seeded random tabular model.
    GenModel(GenModelArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Tabular JSON model file.
    #[arg(long, required_unless_present = "corpus")]
    pub model: Option<PathBuf>,
    /// Whitespace-tokenized training corpus, one sequence per line.
    #[arg(long, conflicts_with = "model")]
    pub corpus: Option<PathBuf>,
    /// N-gram order when training from --corpus.
    #[arg(long, default_value_t = 2, requires = "corpus")]
    pub ngram_order: usize,
    /// Additive smoothing constant when training from --corpus.
    #[arg(long, default_value_t = 0.1, requires = "corpus")]
    pub delta: f64,
}

/// Decoder knobs. Unset flags fall back to the preset, then to the defaults
/// (beam 5, length penalty 1, power penalty, patience 1, max length 64).
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Start from a named configuration: mt, xsum-style or cnndm-style.
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Beam size k [default: 5].
    #[arg(long, short = 'k')]
    pub beam_size: Option<usize>,
    /// Patience factor p [default: 1].
    #[arg(long, short = 'p')]
    pub patience: Option<f64>,
    /// Maximum total length including BOS [default: 64].
    #[arg(long)]
    pub max_length: Option<usize>,
    /// Length-penalty exponent [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub length_penalty: Option<f64>,
    /// power or gnmt [default: power].
    #[arg(long)]
    pub penalty_style: Option<PenaltyStyle>,
    /// Generated tokens required before EOS [default: 0].
    #[arg(long)]
    pub min_length: Option<usize>,
    /// Forbid repeating n-grams of this size; 0 disables [default: 0].
    #[arg(long)]
    pub no_repeat_ngram_size: Option<usize>,
    /// full_scan or top_2k [default: full_scan].
    #[arg(long)]
    pub selection_mode: Option<SelectionMode>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> DecoderConfig {
        let mut c = DecoderConfig::default();
        self.overlay(&mut c);
        c
    }

    /// Applies only what was given on the command line. A preset replaces `c` wholesale.
    pub fn overlay(&self, c: &mut DecoderConfig) {
        if let Some(p) = self.preset {
            *c = p.config();
        }
        if let Some(v) = self.beam_size {
            c.beam_size = v;
        }
        if let Some(v) = self.patience {
            c.patience = v;
        }
        if let Some(v) = self.max_length {
            c.max_length = v;
        }
        if let Some(v) = self.length_penalty {
            c.length_penalty = v;
        }
        if let Some(v) = self.penalty_style {
            c.penalty_style = v;
        }
        if let Some(v) = self.min_length {
            c.min_length = v;
        }
        if let Some(v) = self.no_repeat_ngram_size {
            c.no_repeat_ngram_size = v;
        }
        if let Some(v) = self.selection_mode {
            c.selection_mode = v;
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// File with one input key per line; blank lines are skipped.
    #[arg(long, conflicts_with = "context")]
    pub inputs: Option<PathBuf>,
    /// Input key to condition on; repeatable. Without any, one unconditioned run.
    #[arg(long)]
    pub context: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// greedy, vanilla, fcfs or fcfs-reference.
    #[arg(long, short = 'a', default_value = "fcfs")]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub inputs: InputArgs,
    /// Write per-step search traces here as JSONL.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write results here instead of stdout, with a manifest alongside.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, short = 'j', default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep specification. Replaces the model, axis and value flags.
    #[arg(long, conflicts_with_all = ["model", "corpus", "axis", "values"])]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, conflicts_with = "model")]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub ngram_order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// patience, beam-size or length-penalty.
    #[arg(long, requires = "values")]
    pub axis: Option<SweepAxis>,
    /// Comma-separated, strictly increasing values.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        requires = "axis"
    )]
    pub values: Option<Vec<f64>>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub inputs: InputArgs,
    /// Timed repetitions per cell.
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Drop the wall-clock column so the CSV is reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, short = 'j', default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub inputs: InputArgs,
    /// Refuse to search spaces larger than this.
    #[arg(long, default_value_t = beamkit_core::oracle::DEFAULT_ENUMERATION_LIMIT)]
    pub max_enumerate: u128,
    /// Also run this decoder and report its score gap to the optimum.
    #[arg(long)]
    pub check_beam: Option<Algorithm>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Tabular JSON model file.
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenModelArgs {
    /// Total vocabulary size including BOS and EOS.
    #[arg(long, default_value_t = 6)]
    pub vocab_size: usize,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Minimum EOS probability in every row.
    #[arg(long)]
    pub eos_floor: Option<f64>,
    /// Input key with its own table; repeatable.
    #[arg(long = "input")]
    pub inputs: Vec<String>,
    #[arg(long, env = "BEAMKIT_SEED")]
    pub seed: u64,
    /// Write the model here instead of stdout, with a manifest alongside.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}
