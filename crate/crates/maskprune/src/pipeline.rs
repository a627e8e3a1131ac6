//! End-to-end command flows shared by the CLI binary and the examples.
//! Each `run_*` function validates its config, does the work, writes its
//! artifacts, and returns a one-line JSON summary plus any scoring
//! warnings. Nothing is written until computation has succeeded, so a
//! failing run leaves no partial outputs.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use crate::coco::{emit_coco, read_coco};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::report::{
    manifest_path, write_coverage, write_distribution, write_image_scores,
    write_instance_scores, write_manifest,
};
use crate::score::{image_scores_by, score_dataset, DatasetScores, Method, ScoreOptions};
use crate::select::{prune, select_random, select_top_k, SelectionResult};
use crate::stats::{default_area_edges, distribution_report};
use crate::synth::{gen_corpus, CorpusConfig};

/// How a run ranks images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMethod {
    /// Class-balanced score.
    #[default]
    Cb,
    /// Scale-invariant score.
    Si,
    /// Raw perimeter-to-area score.
    Scs,
    /// Seeded random baseline.
    Random,
}

impl RunMethod {
    pub fn name(&self) -> &'static str {
        match self {
            RunMethod::Cb => "cb",
            RunMethod::Si => "si",
            RunMethod::Scs => "scs",
            RunMethod::Random => "random",
        }
    }

    fn score_stage(&self) -> Option<Method> {
        match self {
            RunMethod::Cb => Some(Method::Cb),
            RunMethod::Si => Some(Method::Si),
            RunMethod::Scs => Some(Method::Scs),
            RunMethod::Random => None,
        }
    }
}

/// Everything a command invocation needs. Unused fields are ignored by
/// commands that do not need them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub annotations: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub pruning_rate: f64,
    pub method: RunMethod,
    pub seed: Option<u64>,
    pub skip_crowds: bool,
    /// Images to generate (synth only).
    pub count: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            annotations: None,
            out: None,
            report: None,
            pruning_rate: 0.0,
            method: RunMethod::default(),
            seed: None,
            skip_crowds: false,
            count: 100,
        }
    }
}

/// A finished run: the machine summary for standard output and the
/// warnings for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: Value,
    pub warnings: Vec<String>,
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, command: &str) -> Result<&'a PathBuf> {
    path.as_ref()
        .ok_or_else(|| Error::argument(format!("{command} requires {flag}")))
}

fn load(config: &RunConfig, command: &str) -> Result<Dataset> {
    let path = require(&config.annotations, "--annotations", command)?;
    read_coco(path)
}

fn score_options(config: &RunConfig) -> ScoreOptions {
    ScoreOptions { skip_crowds: config.skip_crowds }
}

fn warning_lines(scores: &DatasetScores) -> Vec<String> {
    scores.warnings.iter().map(|w| w.to_string()).collect()
}

/// Score a dataset and write the per-instance and per-image CSV reports.
pub fn run_score(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let report_dir = require(&config.report, "--report", "score")?.clone();
    let stage = config.method.score_stage().ok_or_else(|| {
        Error::argument("random is a selection baseline, not a scoring method")
    })?;

    let dataset = load(config, "score")?;
    let scores = score_dataset(&dataset, score_options(config));
    let images = image_scores_by(&dataset, &scores.instances, stage);

    write_instance_scores(&report_dir.join("instance_scores.csv"), &scores.instances)?;
    write_image_scores(&report_dir.join("image_scores.csv"), &images)?;

    Ok(RunOutput {
        summary: json!({
            "command": "score",
            "images": dataset.images.len(),
            "instances": dataset.instances.len(),
            "scored": scores.instances.len(),
            "skipped_crowds": scores.skipped_crowds,
            "warnings": scores.warnings.len(),
            "method": config.method.name(),
            "report": report_dir,
            "elapsed_s": started.elapsed().as_secs_f64(),
        }),
        warnings: warning_lines(&scores),
    })
}

fn select(config: &RunConfig, dataset: &Dataset) -> Result<(SelectionResult, Vec<String>)> {
    match config.method.score_stage() {
        Some(stage) => {
            let scores = score_dataset(dataset, score_options(config));
            let images = image_scores_by(dataset, &scores.instances, stage);
            Ok((select_top_k(&images, config.pruning_rate)?, warning_lines(&scores)))
        }
        None => {
            let seed = config.seed.ok_or_else(|| {
                Error::argument("method random requires --seed for reproducibility")
            })?;
            let ids: Vec<u64> = dataset.images.iter().map(|i| i.id).collect();
            Ok((select_random(&ids, config.pruning_rate, seed)?, Vec::new()))
        }
    }
}

/// Rank, select, and write the pruned annotation file plus its manifest,
/// and a per-class coverage report when a report directory is given.
pub fn run_prune(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let out = require(&config.out, "--out", "prune")?.clone();
    if config.annotations.as_deref() == Some(&out) {
        return Err(Error::argument(
            "--out must differ from --annotations; refusing to overwrite the input",
        ));
    }

    let dataset = load(config, "prune")?;
    let (selection, warnings) = select(config, &dataset)?;
    let bytes = emit_coco(&dataset, &selection.kept_image_ids)?;

    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&out, bytes)?;
    let manifest = manifest_path(&out);
    write_manifest(&manifest, &selection.kept_image_ids)?;

    let mut coverage = None;
    if let Some(report_dir) = &config.report {
        let pruned = prune(&dataset, &selection)?;
        let path = report_dir.join("coverage.csv");
        write_coverage(&path, &dataset, &pruned)?;
        coverage = Some(path);
    }

    Ok(RunOutput {
        summary: json!({
            "command": "prune",
            "images": dataset.images.len(),
            "instances": dataset.instances.len(),
            "kept": selection.kept_count,
            "pruning_rate": selection.pruning_rate,
            "method": config.method.name(),
            "out": out,
            "manifest": manifest,
            "coverage": coverage,
            "warnings": warnings.len(),
            "elapsed_s": started.elapsed().as_secs_f64(),
        }),
        warnings,
    })
}

/// Write the distribution report for a dataset.
pub fn run_stats(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let report_dir = require(&config.report, "--report", "stats")?.clone();
    let dataset = load(config, "stats")?;
    let report = distribution_report(&dataset, &default_area_edges())?;
    let path = report_dir.join("distribution.json");
    write_distribution(&path, &report)?;
    Ok(RunOutput {
        summary: json!({
            "command": "stats",
            "images": report.image_count,
            "instances": report.instance_count,
            "degenerate": report.area_histogram.degenerate,
            "report": path,
            "elapsed_s": started.elapsed().as_secs_f64(),
        }),
        warnings: Vec::new(),
    })
}

/// Generate a synthetic corpus and write it as an annotation file.
pub fn run_synth(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let out = require(&config.out, "--out", "synth")?.clone();
    let corpus = CorpusConfig {
        image_count: config.count,
        seed: config.seed.unwrap_or(0),
        ..CorpusConfig::default()
    };
    let dataset = gen_corpus(&corpus)?;
    let all_ids: Vec<u64> = dataset.images.iter().map(|i| i.id).collect();
    let bytes = emit_coco(&dataset, &all_ids)?;
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&out, bytes)?;
    Ok(RunOutput {
        summary: json!({
            "command": "synth",
            "images": dataset.images.len(),
            "instances": dataset.instances.len(),
            "seed": corpus.seed,
            "out": out,
            "elapsed_s": started.elapsed().as_secs_f64(),
        }),
        warnings: Vec::new(),
    })
}
