use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decode::{fcfs_beam, greedy_decode, vanilla_beam};
use crate::error::{ModelError, SweepError};
use crate::models::{random_tabular, NGramModel, RandomModelSpec, ScorerModel, TabularModel};
use crate::types::{DecodeResult, DecoderConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Patience,
    BeamSize,
    LengthPenalty,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Patience => "patience",
            SweepAxis::BeamSize => "beam_size",
            SweepAxis::LengthPenalty => "length_penalty",
        }
    }

    fn apply(self, base: &DecoderConfig, value: f64) -> DecoderConfig {
        let mut c = base.clone();
        match self {
            SweepAxis::Patience => c.patience = value,
            SweepAxis::BeamSize => c.beam_size = value as usize,
            SweepAxis::LengthPenalty => c.length_penalty = value,
        }
        c
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "patience" => Ok(SweepAxis::Patience),
            "beam_size" => Ok(SweepAxis::BeamSize),
            "length_penalty" => Ok(SweepAxis::LengthPenalty),
            _ => Err(format!(
                "unknown axis `{s}` (expected patience|beam-size|length-penalty)"
            )),
        }
    }
}

/// Where a sweep gets its scoring model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSource {
    /// Tabular JSON model file.
    Tabular(PathBuf),
    Random {
        #[serde(flatten)]
        spec: RandomModelSpec,
        seed: u64,
    },
    Ngram {
        corpus: PathBuf,
        order: usize,
        delta: f64,
    },
}

impl ModelSource {
    pub fn load(&self) -> Result<Box<dyn ScorerModel>, ModelError> {
        Ok(match self {
            ModelSource::Tabular(path) => Box::new(TabularModel::load(path)?),
            ModelSource::Random { spec, seed } => Box::new(random_tabular(spec, *seed)?),
            ModelSource::Ngram {
                corpus,
                order,
                delta,
            } => {
                let text = std::fs::read_to_string(corpus).map_err(|source| ModelError::Io {
                    path: corpus.clone(),
                    source,
                })?;
                Box::new(NGramModel::from_corpus_text(&text, *order, *delta)?)
            }
        })
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: ModelSource,
    #[serde(default)]
    pub base_config: DecoderConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Input keys; empty means a single unconditioned run.
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default = "one")]
    pub repetitions: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::Spec(m));
        if self.values.is_empty() {
            return bad("values must be non-empty".into());
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return bad("values must be finite".into());
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("values must be strictly increasing".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be >= 1".into());
        }
        if self.axis == SweepAxis::BeamSize
            && self.values.iter().any(|&v| v < 1.0 || v.fract() != 0.0)
        {
            return bad("beam_size values must be positive integers".into());
        }
        for &v in &self.values {
            self.axis
                .apply(&self.base_config, v)
                .validate()
                .map_err(|e| SweepError::Spec(format!("{}={v}: {e}", self.axis.name())))?;
        }
        Ok(())
    }

    fn input_keys(&self) -> Vec<Option<String>> {
        if self.inputs.is_empty() {
            vec![None]
        } else {
            self.inputs.iter().cloned().map(Some).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellOutcome {
    pub steps: usize,
    pub candidates_scored: usize,
    pub best_score: f64,
    pub finished: bool,
}

impl From<&DecodeResult> for CellOutcome {
    fn from(r: &DecodeResult) -> Self {
        Self {
            steps: r.stats.steps_executed,
            candidates_scored: r.stats.candidates_scored,
            best_score: r.best.score(),
            finished: r.best.is_finished(),
        }
    }
}

/// One (value, input) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub value: f64,
    pub input: Option<String>,
    pub fcfs: CellOutcome,
    pub vanilla: CellOutcome,
    pub greedy: CellOutcome,
    #[serde(skip)]
    pub fcfs_time: Duration,
    #[serde(skip)]
    pub vanilla_time: Duration,
}

/// Per-value means over inputs. FCFS runs at the swept configuration; vanilla and
/// greedy run at the same configuration as baselines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub mean_steps: f64,
    pub mean_candidates_scored: f64,
    pub mean_best_score: f64,
    pub fraction_finished: f64,
    pub vanilla_mean_steps: f64,
    pub vanilla_mean_candidates_scored: f64,
    pub vanilla_mean_best_score: f64,
    pub greedy_mean_best_score: f64,
    /// FCFS wall-clock divided by vanilla wall-clock, summed over the row's cells.
    pub rel_time_vs_vanilla: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub cells: Vec<SweepCell>,
}

impl SweepReport {
    pub const TIMING_NOTE: &'static str = "rel_time_vs_vanilla is FCFS wall-clock divided by vanilla beam wall-clock at the same configuration, measured on this machine; candidates_scored is the deterministic cost proxy";

    pub fn header(&self, include_timing: bool) -> Vec<&'static str> {
        let mut h = vec![
            self.axis.name(),
            "mean_steps",
            "mean_candidates_scored",
            "mean_best_score",
            "fraction_finished",
            "vanilla_mean_steps",
            "vanilla_mean_candidates_scored",
            "vanilla_mean_best_score",
            "greedy_mean_best_score",
        ];
        if include_timing {
            h.push("rel_time_vs_vanilla");
        }
        h
    }

    /// Comma-separated, one row per swept value, `.` as decimal separator.
    pub fn to_csv(&self, include_timing: bool) -> String {
        let mut out = self.header(include_timing).join(",");
        out.push('\n');
        for r in &self.rows {
            let mut cols = vec![
                r.value,
                r.mean_steps,
                r.mean_candidates_scored,
                r.mean_best_score,
                r.fraction_finished,
                r.vanilla_mean_steps,
                r.vanilla_mean_candidates_scored,
                r.vanilla_mean_best_score,
                r.greedy_mean_best_score,
            ];
            if include_timing {
                cols.push(r.rel_time_vs_vanilla);
            }
            let line: Vec<String> = cols.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Cells for one input, in swept-value order.
    pub fn cells_for(&self, input: Option<&str>) -> Vec<&SweepCell> {
        self.cells
            .iter()
            .filter(|c| c.input.as_deref() == input)
            .collect()
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    spec.validate()?;
    let model = spec.model.load()?;
    run_sweep_with_model(spec, model.as_ref())
}

fn timed<F>(reps: usize, mut f: F) -> Result<(DecodeResult, Duration), crate::error::DecodeError>
where
    F: FnMut() -> Result<DecodeResult, crate::error::DecodeError>,
{
    let start = Instant::now();
    let mut res = f()?;
    for _ in 1..reps {
        res = f()?;
    }
    Ok((res, start.elapsed() / reps as u32))
}

/// Cells run in parallel on the current rayon pool; install a one-thread pool for
/// timing-sensitive runs.
pub fn run_sweep_with_model<M: ScorerModel + ?Sized>(
    spec: &SweepSpec,
    model: &M,
) -> Result<SweepReport, SweepError> {
    spec.validate()?;
    let inputs = spec.input_keys();
    let jobs: Vec<(f64, Option<String>)> = spec
        .values
        .iter()
        .flat_map(|&v| inputs.iter().map(move |i| (v, i.clone())))
        .collect();

    let cells = jobs
        .into_par_iter()
        .map(|(value, input)| {
            let config = spec.axis.apply(&spec.base_config, value);
            let key = input.as_deref();
            let wrap = |source| SweepError::Decode {
                input: input.clone(),
                axis: spec.axis.name(),
                value,
                source,
            };
            let (fcfs, fcfs_time) =
                timed(spec.repetitions, || fcfs_beam(model, key, &config)).map_err(wrap)?;
            let (vanilla, vanilla_time) =
                timed(spec.repetitions, || vanilla_beam(model, key, &config)).map_err(wrap)?;
            let greedy = greedy_decode(model, key, &config).map_err(wrap)?;
            Ok(SweepCell {
                value,
                input: input.clone(),
                fcfs: (&fcfs).into(),
                vanilla: (&vanilla).into(),
                greedy: (&greedy).into(),
                fcfs_time,
                vanilla_time,
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let rows = spec
        .values
        .iter()
        .map(|&value| {
            let group: Vec<&SweepCell> = cells.iter().filter(|c| c.value == value).collect();
            let n = group.len() as f64;
            let mean = |f: &dyn Fn(&SweepCell) -> f64| group.iter().map(|c| f(c)).sum::<f64>() / n;
            let fcfs_t: f64 = group.iter().map(|c| c.fcfs_time.as_secs_f64()).sum();
            let van_t: f64 = group.iter().map(|c| c.vanilla_time.as_secs_f64()).sum();
            SweepRow {
                value,
                mean_steps: mean(&|c| c.fcfs.steps as f64),
                mean_candidates_scored: mean(&|c| c.fcfs.candidates_scored as f64),
                mean_best_score: mean(&|c| c.fcfs.best_score),
                fraction_finished: mean(&|c| f64::from(u8::from(c.fcfs.finished))),
                vanilla_mean_steps: mean(&|c| c.vanilla.steps as f64),
                vanilla_mean_candidates_scored: mean(&|c| c.vanilla.candidates_scored as f64),
                vanilla_mean_best_score: mean(&|c| c.vanilla.best_score),
                greedy_mean_best_score: mean(&|c| c.greedy.best_score),
                rel_time_vs_vanilla: if van_t > 0.0 {
                    fcfs_t / van_t
                } else {
                    f64::NAN
                },
            }
        })
        .collect();

    Ok(SweepReport {
        axis: spec.axis,
        rows,
        cells,
    })
}
