use serde::{Deserialize, Serialize};

use super::hypothesis::Hypothesis;
use super::penalty::{LengthPenalty, PenaltyStyle};
use crate::error::ConfigError;

/// How the FCFS decoder picks its ordered pop list from the expanded candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Sort every candidate.
    #[default]
    FullScan,
    /// Partial selection of the best `2k`; at most `k` of them can end in EOS.
    #[serde(rename = "top_2k")]
    Top2k,
}

impl std::str::FromStr for SelectionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full_scan" | "full-scan" => Ok(Self::FullScan),
            "top_2k" | "top-2k" => Ok(Self::Top2k),
            other => Err(format!(
                "unknown selection mode `{other}` (expected full_scan|top_2k)"
            )),
        }
    }
}

/// Every knob the decoders read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoderConfig {
    /// Unfinished hypotheses kept per step (`k`).
    pub beam_size: usize,
    /// FCFS stops once `|F| >= beam_size * patience`.
    pub patience: f64,
    /// Total tokens including BOS (`M`); at most `M - 1` decoding steps.
    pub max_length: usize,
    /// Length-penalty exponent.
    pub length_penalty: f64,
    pub penalty_style: PenaltyStyle,
    /// Generated tokens required before EOS is allowed.
    pub min_length: usize,
    /// 0 disables.
    pub no_repeat_ngram_size: usize,
    pub selection_mode: SelectionMode,
}

impl Default for DecoderConfig {
    /// Translation baseline: beam 5, length penalty 1, classic FCFS stopping (`p = 1`).
    fn default() -> Self {
        Self {
            beam_size: 5,
            patience: 1.0,
            max_length: 64,
            length_penalty: 1.0,
            penalty_style: PenaltyStyle::Power,
            min_length: 0,
            no_repeat_ngram_size: 0,
            selection_mode: SelectionMode::FullScan,
        }
    }
}

/// Named configurations mirroring the published decoding hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Mt,
    XsumStyle,
    CnndmStyle,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Mt, Preset::XsumStyle, Preset::CnndmStyle];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Mt => "mt",
            Preset::XsumStyle => "xsum-style",
            Preset::CnndmStyle => "cnndm-style",
        }
    }

    pub fn config(self) -> DecoderConfig {
        let base = DecoderConfig::default();
        match self {
            Preset::Mt => DecoderConfig {
                beam_size: 5,
                length_penalty: 1.0,
                patience: 2.0,
                ..base
            },
            Preset::XsumStyle => DecoderConfig {
                beam_size: 6,
                length_penalty: 1.0,
                patience: 0.5,
                max_length: 60,
                min_length: 10,
                no_repeat_ngram_size: 3,
                ..base
            },
            Preset::CnndmStyle => DecoderConfig {
                beam_size: 4,
                length_penalty: 2.0,
                patience: 0.5,
                max_length: 140,
                min_length: 55,
                no_repeat_ngram_size: 3,
                ..base
            },
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}` (expected mt|xsum-style|cnndm-style)"))
    }
}

/// Non-fatal configuration findings.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigWarning {
    /// `k * p < 1`: FCFS returns at the first finished hypothesis.
    PatienceBelowOneFinisher { beam_size: usize, patience: f64 },
}

impl std::fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigWarning::PatienceBelowOneFinisher {
                beam_size,
                patience,
            } => write!(
                f,
                "beam_size * patience = {} < 1; FCFS stops at the first finished hypothesis",
                *beam_size as f64 * patience
            ),
        }
    }
}

impl DecoderConfig {
    pub fn penalty(&self) -> LengthPenalty {
        LengthPenalty::new(self.length_penalty, self.penalty_style)
    }

    pub fn normalized_score(&self, sum_logprob: f64, length: usize) -> f64 {
        self.penalty().normalize(sum_logprob, length)
    }

    /// The literal FCFS stopping test `|F| >= k * p`.
    pub fn patience_reached(&self, finished: usize) -> bool {
        finished as f64 >= self.beam_size as f64 * self.patience
    }

    pub fn validate(&self) -> Result<Vec<ConfigWarning>, ConfigError> {
        if self.beam_size == 0 {
            return Err(ConfigError::BeamSize);
        }
        if self.patience.is_nan() || self.patience <= 0.0 || self.patience.is_infinite() {
            return Err(ConfigError::Patience(self.patience));
        }
        if self.max_length < 2 {
            return Err(ConfigError::MaxLength(self.max_length));
        }
        if self.max_length <= self.min_length + 1 {
            return Err(ConfigError::MinLength {
                min_length: self.min_length,
                max_length: self.max_length,
            });
        }
        if !self.length_penalty.is_finite() {
            return Err(ConfigError::LengthPenalty(self.length_penalty));
        }
        let mut warnings = Vec::new();
        if (self.beam_size as f64) * self.patience < 1.0 {
            warnings.push(ConfigWarning::PatienceBelowOneFinisher {
                beam_size: self.beam_size,
                patience: self.patience,
            });
        }
        Ok(warnings)
    }

    /// Validates and logs any warnings.
    pub fn check(&self) -> Result<(), ConfigError> {
        for w in self.validate()? {
            log::warn!("{w}");
        }
        Ok(())
    }

    pub fn rescore(&self, hyp: &Hypothesis) -> f64 {
        self.normalized_score(hyp.sum_logprob(), hyp.generated_len())
    }
}
