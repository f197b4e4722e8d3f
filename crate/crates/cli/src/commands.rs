use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use beamkit_core::bench::{run_sweep, ModelSource, SweepSpec};
use beamkit_core::decode::Algorithm;
use beamkit_core::models::{
    random_tabular, NGramModel, RandomModelSpec, ScorerModel, TabularModel,
};
use beamkit_core::oracle::exhaustive_best_with;
use beamkit_core::{DecoderConfig, SearchStats, Termination};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{
    DecodeArgs, GenModelArgs, InputArgs, ModelArgs, OracleArgs, SweepArgs, ValidateArgs,
};
use crate::error::CliError;
use crate::manifest::{FileDigest, RunManifest};

#[derive(Serialize)]
struct DecodeLine<'a> {
    context: Option<&'a str>,
    tokens: Vec<String>,
    sum_logprob: f64,
    score: f64,
    finished: bool,
    terminated_by: Termination,
    stats: SearchStats,
}

#[derive(Serialize)]
struct BeamCheck {
    algorithm: Algorithm,
    tokens: Vec<String>,
    score: f64,
    finished: bool,
    /// Oracle score minus beam score.
    gap: f64,
}

#[derive(Serialize)]
struct OracleLine<'a> {
    context: Option<&'a str>,
    tokens: Vec<String>,
    sum_logprob: f64,
    score: f64,
    num_enumerated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<BeamCheck>,
}

struct LoadedModel {
    model: Box<dyn ScorerModel>,
    digest: FileDigest,
}

fn load_model(args: &ModelArgs) -> Result<LoadedModel, CliError> {
    if let Some(path) = &args.model {
        let model = TabularModel::load(path)?;
        return Ok(LoadedModel {
            model: Box::new(model),
            digest: FileDigest::of(path)?,
        });
    }
    let path = args
        .corpus
        .as_ref()
        .ok_or_else(|| CliError::Usage("one of --model or --corpus is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let model = NGramModel::from_corpus_text(&text, args.ngram_order, args.delta)?;
    Ok(LoadedModel {
        model: Box::new(model),
        digest: FileDigest::of(path)?,
    })
}

fn read_inputs(args: &InputArgs) -> Result<Vec<Option<String>>, CliError> {
    if let Some(path) = &args.inputs {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let keys: Vec<_> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| Some(l.to_string()))
            .collect();
        if keys.is_empty() {
            return Err(CliError::Data(format!("{}: no inputs", path.display())));
        }
        return Ok(keys);
    }
    if args.context.is_empty() {
        Ok(vec![None])
    } else {
        Ok(args.context.iter().cloned().map(Some).collect())
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Data(format!("cannot start worker threads: {e}")))
}

/// Writes to `output` (plus its manifest) or to stdout.
fn emit(text: &str, output: Option<&Path>, manifest: &RunManifest) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::io(path, e))?;
            manifest.write_beside(path)
        }
        None => print(text),
    }
}

fn print(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Data(format!("stdout: {e}")))
}

pub fn decode(args: DecodeArgs) -> Result<(), CliError> {
    let config = args.config.resolve();
    config.check()?;
    let inputs = read_inputs(&args.inputs)?;
    let loaded = load_model(&args.model)?;
    let model = loaded.model.as_ref();
    let vocab = model.vocabulary();
    let algorithm = args.algorithm;
    let want_trace = args.trace.is_some();

    let results = pool(args.jobs)?.install(|| {
        inputs
            .par_iter()
            .map(|input| {
                let input = input.as_deref();
                if want_trace {
                    algorithm
                        .decode_traced(model, input, &config)
                        .map(|(r, t)| (r, Some(t)))
                } else {
                    algorithm.decode(model, input, &config).map(|r| (r, None))
                }
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut text = String::new();
    let mut trace_text = String::new();
    for (input, (result, trace)) in inputs.iter().zip(&results) {
        let best = &result.best;
        let line = DecodeLine {
            context: input.as_deref(),
            tokens: vocab.render(best.tokens()),
            sum_logprob: best.sum_logprob(),
            score: best.score(),
            finished: best.is_finished(),
            terminated_by: result.stats.terminated_by,
            stats: result.stats,
        };
        text.push_str(&serde_json::to_string(&line).expect("decode line serializes"));
        text.push('\n');
        if let Some(trace) = trace {
            let ctx = serde_json::to_string(&input).expect("context serializes");
            for step in trace.to_jsonl(vocab).lines() {
                trace_text.push_str(&format!("{{\"context\":{ctx},{}\n", &step[1..]));
            }
        }
    }

    let mut manifest = RunManifest::new(
        "decode",
        json!({ "algorithm": algorithm, "decoder": config, "inputs": inputs }),
    );
    manifest.model = Some(loaded.digest);
    if let Some(path) = &args.trace {
        fs::write(path, &trace_text).map_err(|e| CliError::io(path, e))?;
        manifest.write_beside(path)?;
    }
    emit(&text, args.output.as_deref(), &manifest)
}

/// Relative model paths in a spec file are taken relative to the file itself.
fn rebase(source: ModelSource, base: &Path) -> ModelSource {
    let fix = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
    match source {
        ModelSource::Tabular(p) => ModelSource::Tabular(fix(p)),
        ModelSource::Ngram {
            corpus,
            order,
            delta,
        } => ModelSource::Ngram {
            corpus: fix(corpus),
            order,
            delta,
        },
        other => other,
    }
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let spec: SweepSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            SweepSpec {
                model: rebase(spec.model, base),
                ..spec
            }
        }
        None => {
            let model = match (&args.model, &args.corpus) {
                (Some(p), _) => ModelSource::Tabular(p.clone()),
                (None, Some(c)) => ModelSource::Ngram {
                    corpus: c.clone(),
                    order: args.ngram_order,
                    delta: args.delta,
                },
                (None, None) => {
                    return Err(CliError::Usage(
                        "sweep needs --spec, --model or --corpus".into(),
                    ))
                }
            };
            let (Some(axis), Some(values)) = (args.axis, args.values.clone()) else {
                return Err(CliError::Usage("sweep needs --axis and --values".into()));
            };
            SweepSpec {
                model,
                base_config: DecoderConfig::default(),
                axis,
                values,
                inputs: Vec::new(),
                repetitions: 1,
            }
        }
    };
    args.config.overlay(&mut spec.base_config);
    let inputs = &args.inputs;
    if inputs.inputs.is_some() || !inputs.context.is_empty() {
        spec.inputs = read_inputs(inputs)?.into_iter().flatten().collect();
    }
    if let Some(r) = args.repetitions {
        spec.repetitions = r;
    }
    Ok(spec)
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = sweep_spec(&args)?;
    spec.validate()?;
    let report = pool(args.jobs)?.install(|| run_sweep(&spec))?;
    let include_timing = !args.no_timing;

    let mut manifest = RunManifest::new(
        "sweep",
        json!({ "spec": spec, "include_timing": include_timing }),
    );
    match &spec.model {
        ModelSource::Tabular(p) => manifest.model = Some(FileDigest::of(p)?),
        ModelSource::Ngram { corpus, .. } => manifest.model = Some(FileDigest::of(corpus)?),
        ModelSource::Random { seed, .. } => manifest.seed = Some(*seed),
    }
    if include_timing {
        log::info!("{}", beamkit_core::bench::SweepReport::TIMING_NOTE);
    }
    emit(
        &report.to_csv(include_timing),
        args.output.as_deref(),
        &manifest,
    )
}

pub fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let config = args.config.resolve();
    config.check()?;
    let inputs = read_inputs(&args.inputs)?;
    let loaded = load_model(&args.model)?;
    let model = loaded.model.as_ref();
    let vocab = model.vocabulary();

    let mut out = String::new();
    for input in &inputs {
        let input = input.as_deref();
        let found = exhaustive_best_with(
            model,
            input,
            &config,
            args.max_enumerate,
            Default::default(),
        )?;
        let check = match args.check_beam {
            Some(algorithm) => {
                let r = algorithm.decode(model, input, &config)?;
                Some(BeamCheck {
                    algorithm,
                    tokens: vocab.render(r.best.tokens()),
                    score: r.best.score(),
                    finished: r.best.is_finished(),
                    gap: found.best.score() - r.best.score(),
                })
            }
            None => None,
        };
        let line = OracleLine {
            context: input,
            tokens: vocab.render(found.best.tokens()),
            sum_logprob: found.best.sum_logprob(),
            score: found.best.score(),
            num_enumerated: found.num_enumerated,
            check,
        };
        out.push_str(&serde_json::to_string(&line).expect("oracle line serializes"));
        out.push('\n');
    }
    print(&out)
}

pub fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let path = &args.model;
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::Data(format!(
                "model file not found: {}",
                path.display()
            )))
        }
        Err(e) => return Err(CliError::io(path, e)),
    };
    let model = TabularModel::from_json_str(&text, path)?;
    let violations = model.violations();
    if violations.is_empty() {
        println!(
            "ok: {} ({} tokens, order {}, {} rows)",
            path.display(),
            model.vocabulary().len(),
            model.order(),
            model.num_rows()
        );
        return Ok(());
    }
    let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
    Err(CliError::Data(format!(
        "{}: {} violation(s)\n{}",
        path.display(),
        violations.len(),
        lines.join("\n")
    )))
}

pub fn gen_model(args: GenModelArgs) -> Result<(), CliError> {
    let spec = RandomModelSpec {
        vocab_size: args.vocab_size,
        order: args.order,
        eos_floor: args.eos_floor,
        inputs: args.inputs,
    };
    let model = random_tabular(&spec, args.seed)?;
    let mut manifest = RunManifest::new("gen-model", json!({ "spec": spec }));
    manifest.seed = Some(args.seed);
    let mut text = model.to_json();
    text.push('\n');
    emit(&text, args.output.as_deref(), &manifest)
}
