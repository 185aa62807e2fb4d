//! Staged experiment runner: load → preprocess → normalize → featurize →
//! strategy → evaluate, writing every artifact plus a manifest under a
//! timestamped run directory.

use crate::config::{
    EvaluationConfig, ExperimentConfig, GaSection, Mode, SourceConfig, Strategy,
};
use gafs_core::features::{build_matrix, Band, FeatureMatrix, MorletConfig, WelchConfig};
use gafs_core::ga::{GaConfig, GaMode, RunReport};
use gafs_core::ingest::{load_csv, load_edf, synthesize, InstanceSet, Recording};
use gafs_core::learners::{
    classification_report, cluster_evaluator_sweep, kmeans, pca_reduce, ClassMetrics,
    LabeledData, SweepResult,
};
use gafs_core::preprocess::{fir_bandpass, notch, zscore, FilterSpec};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Failure classes mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("data ({stage}): {message}")]
    Data { stage: String, message: String },
    #[error("runtime ({stage}): {message}")]
    Runtime { stage: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data { .. } => 3,
            CliError::Runtime { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub elapsed_s: f64,
    pub status: String,
}

/// Everything needed to reproduce and audit a run. The embedded config is
/// the fully resolved experiment definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub created_utc: String,
    pub package: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub seeds: serde_json::Value,
    pub stages: Vec<StageRecord>,
    pub artifacts: Vec<String>,
    /// On failure, artifacts of completed stages are kept; nothing is
    /// deleted retroactively.
    pub cleanup_policy: String,
    pub error: Option<String>,
}

/// Summary of the learner evaluation written to `evaluation.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Evaluation {
    pub strategy: Strategy,
    pub mode: Mode,
    pub n_selected: usize,
    pub n_total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub silhouette: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepResult>,
}

pub struct RunOutcome {
    pub run_dir: PathBuf,
    pub evaluation: Evaluation,
    pub ga_report: Option<RunReport>,
}

fn stage_err(stage: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Data {
        stage: stage.into(),
        message: e.to_string(),
    }
}

fn runtime_err(stage: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime {
        stage: stage.into(),
        message: e.to_string(),
    }
}

/// Create `<output_dir>/run-<timestamp>[-n]`.
fn create_run_dir(base: &Path) -> Result<PathBuf, CliError> {
    let stamp = chrono::Utc::now().format("%Y%m%d-%H%M%S");
    for attempt in 0..1000 {
        let name = if attempt == 0 {
            format!("run-{stamp}")
        } else {
            format!("run-{stamp}-{attempt}")
        };
        let dir = base.join(name);
        match std::fs::create_dir_all(dir.parent().unwrap())
            .and_then(|_| std::fs::create_dir(&dir))
        {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::Config(format!("cannot create run dir: {e}"))),
        }
    }
    Err(CliError::Config("run directory collision".into()))
}

fn load_sources(cfg: &ExperimentConfig) -> Result<InstanceSet, CliError> {
    let mut recordings: Vec<Recording> = Vec::new();
    for src in &cfg.dataset.sources {
        let (rec, segments) = match src {
            SourceConfig::Edf {
                path,
                condition,
                subject,
                segments,
            } => {
                let mut rec = load_edf(path).map_err(|e| stage_err("load", e))?;
                if let Some(c) = condition {
                    rec = rec.with_condition(c.clone());
                }
                if let Some(s) = subject {
                    rec = rec.with_subject(s.clone());
                }
                (rec, segments)
            }
            SourceConfig::Csv {
                path,
                sampling_rate,
                condition,
                subject,
                segments,
            } => {
                let mut rec = load_csv(path, *sampling_rate, condition)
                    .map_err(|e| stage_err("load", e))?;
                if let Some(s) = subject {
                    rec = rec.with_subject(s.clone());
                }
                (rec, segments)
            }
            SourceConfig::Synthetic {
                subject,
                condition,
                duration_s,
                sampling_rate,
                seed,
                channels,
                segments,
            } => {
                let rec = synthesize(channels, *duration_s, *sampling_rate, *seed)
                    .map_err(|e| stage_err("load", e))?
                    .with_condition(condition.clone())
                    .with_subject(subject.clone());
                (rec, segments)
            }
        };
        if cfg
            .dataset
            .exclude_subjects
            .iter()
            .any(|s| s == rec.subject())
        {
            continue;
        }
        if segments.is_empty() {
            recordings.push(rec);
        } else {
            for seg in segments.iter() {
                let mut cut = rec
                    .segment(seg.start_s, seg.duration_s)
                    .map_err(|e| stage_err("load", e))?;
                if let Some(c) = &seg.condition {
                    cut = cut.with_condition(c.clone());
                }
                recordings.push(cut);
            }
        }
    }
    if let Some(rec) = recordings.iter().find(|r| r.condition().is_empty()) {
        return Err(stage_err(
            "load",
            format!("recording of subject '{}' has no condition label", rec.subject()),
        ));
    }
    InstanceSet::new(recordings).map_err(|e| stage_err("load", e))
}

fn preprocess_set(cfg: &ExperimentConfig, set: InstanceSet) -> Result<InstanceSet, CliError> {
    let filter = FilterSpec {
        high_pass_cutoff: cfg.preprocess.high_pass_hz,
        low_pass_cutoff: cfg.preprocess.low_pass_hz,
        notch_freq: cfg.preprocess.notch_hz,
        notch_bandwidth: cfg.preprocess.notch_bandwidth_hz,
        fir_order: cfg.preprocess.fir_order,
    };
    let mut out = Vec::with_capacity(set.len());
    for rec in set.recordings() {
        let rec = if cfg.preprocess.skip {
            rec.clone()
        } else {
            let band = fir_bandpass(rec, &filter).map_err(|e| stage_err("preprocess", e))?;
            notch(&band, &filter).map_err(|e| stage_err("preprocess", e))?
        };
        out.push(zscore(&rec).map_err(|e| stage_err("preprocess", e))?);
    }
    InstanceSet::new(out).map_err(|e| stage_err("preprocess", e))
}

fn featurize(cfg: &ExperimentConfig, set: &InstanceSet) -> Result<FeatureMatrix, CliError> {
    let bands: Vec<Band> = cfg
        .features
        .bands
        .iter()
        .map(|b| b.resolve().map_err(CliError::Config))
        .collect::<Result<_, _>>()?;
    let rate = set.recordings()[0].sampling_rate();
    let min_len = set
        .recordings()
        .iter()
        .map(|r| r.n_samples())
        .min()
        .unwrap_or(0);
    let wcfg = match cfg.features.welch.segment_len {
        Some(m) => WelchConfig {
            segment_len: m,
            overlap: cfg.features.welch.overlap,
            window: cfg.features.welch.window,
        },
        None => WelchConfig {
            overlap: cfg.features.welch.overlap,
            window: cfg.features.welch.window,
            ..WelchConfig::for_signal(rate, min_len)
        },
    };
    let mcfg = MorletConfig {
        cycles_lo: cfg.features.morlet.cycles_lo,
        cycles_hi: cfg.features.morlet.cycles_hi,
        freq_step: cfg.features.morlet.freq_step,
        fixed_cycles: cfg.features.morlet.fixed_cycles,
        anchor: None,
    };
    build_matrix(set, &bands, &wcfg, &mcfg).map_err(|e| stage_err("features", e))
}

fn ga_config(ga: &GaSection, eval: &EvaluationConfig, mode: Mode) -> GaConfig {
    GaConfig {
        population_size: ga.population_size,
        mating_pool: ga.mating_pool,
        mutations: ga.mutations,
        lambda: ga.lambda,
        max_generations: ga.max_generations,
        max_minutes: ga.max_minutes,
        seed: ga.seed,
        mode: match mode {
            Mode::Supervised => GaMode::Supervised,
            Mode::Unsupervised => GaMode::Unsupervised,
        },
        fitness_family: ga.fitness,
        k: eval.k,
        folds: eval.folds,
        uniform_crossover: ga.uniform_crossover,
    }
}

fn write_json(
    path: &Path,
    value: &impl Serialize,
    artifacts: &mut Vec<String>,
) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| runtime_err("write", e))?;
    std::fs::write(path, text).map_err(|e| runtime_err("write", e))?;
    artifacts.push(path.file_name().unwrap().to_string_lossy().into_owned());
    Ok(())
}

/// Run the full experiment; on success every artifact and the manifest sit
/// in the returned run directory. On failure the manifest still records the
/// completed stages and the failing stage.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome, (CliError, Option<PathBuf>)> {
    let run_dir = create_run_dir(&cfg.output_dir).map_err(|e| (e, None))?;
    let mut stages: Vec<StageRecord> = Vec::new();
    let mut artifacts: Vec<String> = Vec::new();

    let result = run_stages(cfg, &run_dir, &mut stages, &mut artifacts);
    let manifest = Manifest {
        created_utc: chrono::Utc::now().to_rfc3339(),
        package: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        seeds: json!({
            "evaluation": cfg.evaluation.seed,
            "ga": cfg.ga.seed,
        }),
        stages,
        artifacts: artifacts.clone(),
        cleanup_policy: "keep artifacts of completed stages on failure".to_string(),
        error: result.as_ref().err().map(|e| e.to_string()),
    };
    let manifest_path = run_dir.join("manifest.json");
    if let Ok(text) = serde_json::to_string_pretty(&manifest) {
        let _ = std::fs::write(&manifest_path, text);
    }
    match result {
        Ok((evaluation, ga_report)) => Ok(RunOutcome {
            run_dir,
            evaluation,
            ga_report,
        }),
        Err(e) => Err((e, Some(run_dir))),
    }
}

fn run_stages(
    cfg: &ExperimentConfig,
    run_dir: &Path,
    stages: &mut Vec<StageRecord>,
    artifacts: &mut Vec<String>,
) -> Result<(Evaluation, Option<RunReport>), CliError> {
    let timed = |name: &str,
                 stages: &mut Vec<StageRecord>,
                 f: &mut dyn FnMut() -> Result<(), CliError>|
     -> Result<(), CliError> {
        let t0 = Instant::now();
        let result = f();
        stages.push(StageRecord {
            name: name.to_string(),
            elapsed_s: t0.elapsed().as_secs_f64(),
            status: if result.is_ok() { "ok" } else { "failed" }.to_string(),
        });
        result
    };

    // load + preprocess + featurize
    let mut set_opt = None;
    timed("load", stages, &mut || {
        set_opt = Some(load_sources(cfg)?);
        Ok(())
    })?;
    let mut preprocessed = None;
    timed("preprocess", stages, &mut || {
        preprocessed = Some(preprocess_set(cfg, set_opt.clone().unwrap())?);
        Ok(())
    })?;
    let set = preprocessed.unwrap();
    let mut matrix_opt = None;
    timed("features", stages, &mut || {
        matrix_opt = Some(featurize(cfg, &set)?);
        Ok(())
    })?;
    let matrix = matrix_opt.unwrap();
    std::fs::write(run_dir.join("features.csv"), matrix.to_csv_string())
        .map_err(|e| runtime_err("features", e))?;
    artifacts.push("features.csv".into());
    write_json(&run_dir.join("features_meta.json"), &matrix.meta_json(), artifacts)?;

    let data = LabeledData::from_matrix(matrix.clone());
    let n_total = matrix.n_cols();
    let k_default = set.conditions().len();

    // strategy: the matrix handed to the learner
    let mut ga_report: Option<RunReport> = None;
    let mut selected_matrix = matrix.clone();
    let mut n_selected = n_total;
    timed("strategy", stages, &mut || {
        match cfg.strategy {
            Strategy::All => {}
            Strategy::Pca => {
                let red = pca_reduce(&matrix, cfg.pca.variance_threshold)
                    .map_err(|e| runtime_err("strategy", e))?;
                std::fs::write(run_dir.join("pca_scores.csv"), red.scores.to_csv_string())
                    .map_err(|e| runtime_err("strategy", e))?;
                artifacts.push("pca_scores.csv".into());
                write_json(
                    &run_dir.join("pca.json"),
                    &json!({
                        "n_components": red.n_components(),
                        "explained_variance": red.explained_variance,
                        "variance_threshold": red.threshold,
                    }),
                    artifacts,
                )?;
                n_selected = red.n_components();
                selected_matrix = red.scores;
            }
            Strategy::Gafs => {
                let ga_cfg = ga_config(&cfg.ga, &cfg.evaluation, cfg.mode);
                let report = gafs_core::ga::run(&data, &ga_cfg)
                    .map_err(|e| runtime_err("strategy", e))?;
                let names: Vec<&str> = matrix
                    .columns()
                    .iter()
                    .zip(report.selected())
                    .filter(|(_, &keep)| keep)
                    .map(|(c, _)| c.name.as_str())
                    .collect();
                std::fs::write(run_dir.join("selected_features.txt"), names.join("\n"))
                    .map_err(|e| runtime_err("strategy", e))?;
                artifacts.push("selected_features.txt".into());
                write_json(&run_dir.join("ga_report.json"), &report, artifacts)?;
                n_selected = names.len();
                selected_matrix = matrix
                    .masked(report.selected())
                    .map_err(|e| runtime_err("strategy", e))?;
                ga_report = Some(report);
            }
        }
        Ok(())
    })?;

    // learner evaluation on the reduced matrix
    let mut evaluation_opt = None;
    timed("evaluate", stages, &mut || {
        let eval_data = LabeledData::from_matrix(selected_matrix.clone());
        let evaluation = match cfg.mode {
            Mode::Supervised => {
                let report =
                    classification_report(&eval_data, cfg.evaluation.folds, cfg.evaluation.seed)
                        .map_err(|e| runtime_err("evaluate", e))?;
                Evaluation {
                    strategy: cfg.strategy,
                    mode: cfg.mode,
                    n_selected,
                    n_total,
                    classification: Some(report),
                    silhouette: None,
                    sweep: None,
                }
            }
            Mode::Unsupervised => {
                let k = cfg.evaluation.k.unwrap_or(k_default.max(2));
                let cluster = kmeans(&selected_matrix, k, cfg.evaluation.seed)
                    .map_err(|e| runtime_err("evaluate", e))?;
                let sweep = if cfg.evaluation.sweep {
                    Some(
                        cluster_evaluator_sweep(
                            &selected_matrix,
                            2,
                            (k_default + 1).min(selected_matrix.n_rows()),
                            cfg.evaluation.seed,
                        )
                        .map_err(|e| runtime_err("evaluate", e))?,
                    )
                } else {
                    None
                };
                Evaluation {
                    strategy: cfg.strategy,
                    mode: cfg.mode,
                    n_selected,
                    n_total,
                    classification: None,
                    silhouette: Some(cluster.avg_silhouette),
                    sweep,
                }
            }
        };
        write_json(&run_dir.join("evaluation.json"), &evaluation, artifacts)?;
        evaluation_opt = Some(evaluation);
        Ok(())
    })?;
    let evaluation = evaluation_opt.unwrap();

    // rendered reports in the requested formats (JSON artifacts are always
    // written above)
    timed("report", stages, &mut || {
        if cfg.report_formats.contains(&crate::config::ReportFormat::Text) {
            let text = crate::report::render_run(&evaluation, ga_report.as_ref());
            std::fs::write(run_dir.join("tables.txt"), &text)
                .map_err(|e| runtime_err("report", e))?;
            artifacts.push("tables.txt".into());
        }
        if cfg.report_formats.contains(&crate::config::ReportFormat::Csv) {
            let csv = crate::report::summary_csv(&evaluation, ga_report.as_ref());
            std::fs::write(run_dir.join("summary.csv"), &csv)
                .map_err(|e| runtime_err("report", e))?;
            artifacts.push("summary.csv".into());
        }
        Ok(())
    })?;

    Ok((evaluation, ga_report))
}
