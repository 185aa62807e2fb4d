//! Experiment configuration: JSON schema, defaults and whole-file
//! validation that reports every violation at once.

use gafs_core::dsp::WindowKind;
use gafs_core::features::Band;
use gafs_core::ga::FitnessFamily;
use gafs_core::ingest::ChannelSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub preprocess: PreprocessConfig,
    pub features: FeaturesConfig,
    pub strategy: Strategy,
    pub mode: Mode,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub pca: PcaSection,
    #[serde(default)]
    pub ga: GaSection,
    pub output_dir: PathBuf,
    #[serde(default = "default_report_formats")]
    pub report_formats: Vec<ReportFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    All,
    Pca,
    Gafs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Supervised,
    Unsupervised,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
    Csv,
}

fn default_report_formats() -> Vec<ReportFormat> {
    vec![ReportFormat::Json, ReportFormat::Text]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub sources: Vec<SourceConfig>,
    #[serde(default)]
    pub exclude_subjects: Vec<String>,
}

/// Fixed-length task window cut out of a source recording, cue-aligned via
/// an explicit offset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Segment {
    pub start_s: f64,
    pub duration_s: f64,
    #[serde(default)]
    pub condition: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceConfig {
    Edf {
        path: PathBuf,
        #[serde(default)]
        condition: Option<String>,
        #[serde(default)]
        subject: Option<String>,
        #[serde(default)]
        segments: Vec<Segment>,
    },
    Csv {
        path: PathBuf,
        sampling_rate: f64,
        condition: String,
        #[serde(default)]
        subject: Option<String>,
        #[serde(default)]
        segments: Vec<Segment>,
    },
    Synthetic {
        subject: String,
        condition: String,
        duration_s: f64,
        sampling_rate: f64,
        seed: u64,
        channels: Vec<ChannelSpec>,
        #[serde(default)]
        segments: Vec<Segment>,
    },
}

impl SourceConfig {
    pub fn segments(&self) -> &[Segment] {
        match self {
            SourceConfig::Edf { segments, .. }
            | SourceConfig::Csv { segments, .. }
            | SourceConfig::Synthetic { segments, .. } => segments,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    /// Skip the FIR bandpass and notch (already-filtered data); z-score
    /// normalization always runs.
    pub skip: bool,
    pub high_pass_hz: f64,
    pub low_pass_hz: f64,
    pub notch_hz: f64,
    pub notch_bandwidth_hz: f64,
    pub fir_order: Option<usize>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            skip: false,
            high_pass_hz: 0.5,
            low_pass_hz: 45.0,
            notch_hz: 50.0,
            notch_bandwidth_hz: 1.0,
            fir_order: None,
        }
    }
}

/// A band is either one of the named EEG rhythms or an explicit range.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BandConfig {
    Named(String),
    Custom { name: String, lo: f64, hi: f64 },
}

impl BandConfig {
    pub fn resolve(&self) -> Result<Band, String> {
        match self {
            BandConfig::Named(name) => match name.as_str() {
                "delta" => Ok(Band::delta()),
                "theta" => Ok(Band::theta()),
                "alpha" => Ok(Band::alpha()),
                "beta" => Ok(Band::beta()),
                "gamma" => Ok(Band::gamma()),
                "theta_l" => Ok(Band::theta_low()),
                "theta_h" => Ok(Band::theta_high()),
                "beta_l" => Ok(Band::beta_low()),
                "beta_h" => Ok(Band::beta_high()),
                other => Err(format!("unknown band name {other:?}")),
            },
            BandConfig::Custom { name, lo, hi } => {
                Band::new(name.clone(), *lo, *hi).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeaturesConfig {
    pub bands: Vec<BandConfig>,
    #[serde(default)]
    pub welch: WelchSection,
    #[serde(default)]
    pub morlet: MorletSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WelchSection {
    /// Segment length in samples; `null` picks 1-second segments clamped to
    /// the shortest instance.
    pub segment_len: Option<usize>,
    pub overlap: f64,
    pub window: WindowKind,
}

impl Default for WelchSection {
    fn default() -> Self {
        Self {
            segment_len: None,
            overlap: 0.5,
            window: WindowKind::Hamming,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MorletSection {
    pub cycles_lo: f64,
    pub cycles_hi: f64,
    pub freq_step: f64,
    pub fixed_cycles: Option<f64>,
}

impl Default for MorletSection {
    fn default() -> Self {
        Self {
            cycles_lo: 3.0,
            cycles_hi: 7.0,
            freq_step: 0.5,
            fixed_cycles: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluationConfig {
    pub folds: usize,
    pub seed: u64,
    /// Cluster count for unsupervised evaluation; defaults to the number of
    /// distinct conditions.
    pub k: Option<usize>,
    /// Run the silhouette sweep from 2 to tasks + 1.
    pub sweep: bool,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            seed: 0,
            k: None,
            sweep: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PcaSection {
    pub variance_threshold: f64,
}

impl Default for PcaSection {
    fn default() -> Self {
        Self {
            variance_threshold: 0.95,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GaSection {
    pub population_size: usize,
    pub mating_pool: usize,
    pub mutations: usize,
    pub lambda: f64,
    pub fitness: FitnessFamily,
    pub max_generations: usize,
    pub max_minutes: Option<f64>,
    pub seed: u64,
    pub uniform_crossover: bool,
}

impl Default for GaSection {
    fn default() -> Self {
        Self {
            population_size: 8,
            mating_pool: 4,
            mutations: 3,
            lambda: 0.88,
            fitness: FitnessFamily::Nff,
            max_generations: 200,
            max_minutes: None,
            seed: 0,
            uniform_crossover: false,
        }
    }
}

/// One schema violation, addressed by a dotted field path.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Parse and validate a config file, returning either the resolved config
/// or every violation found.
pub fn validate(path: &Path) -> Result<ExperimentConfig, Vec<Violation>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Violation {
            path: String::new(),
            message: format!("cannot read {}: {e}", path.display()),
        }]
    })?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
        vec![Violation {
            path: String::new(),
            message: format!("malformed config: {e}"),
        }]
    })?;
    let violations = check(&cfg);
    if violations.is_empty() {
        Ok(cfg)
    } else {
        Err(violations)
    }
}

/// Semantic checks over a parsed config; collects all violations instead of
/// stopping at the first.
pub fn check(cfg: &ExperimentConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |path: &str, message: String| {
        out.push(Violation {
            path: path.to_string(),
            message,
        })
    };

    if cfg.dataset.sources.is_empty() {
        push("dataset.sources", "at least one source is required".into());
    }
    for (i, src) in cfg.dataset.sources.iter().enumerate() {
        let base = format!("dataset.sources[{i}]");
        match src {
            SourceConfig::Edf {
                path,
                condition,
                segments,
                ..
            } => {
                if !path.exists() {
                    push(&format!("{base}.path"), format!("{} not found", path.display()));
                }
                let has_segment_conditions =
                    !segments.is_empty() && segments.iter().all(|s| s.condition.is_some());
                if condition.is_none() && !has_segment_conditions {
                    push(
                        &format!("{base}.condition"),
                        "a condition label is required (on the source or on every segment)"
                            .into(),
                    );
                }
            }
            SourceConfig::Csv {
                path,
                sampling_rate,
                ..
            } => {
                if !path.exists() {
                    push(&format!("{base}.path"), format!("{} not found", path.display()));
                }
                if !(sampling_rate > &0.0) {
                    push(
                        &format!("{base}.sampling_rate"),
                        format!("must be positive, got {sampling_rate}"),
                    );
                }
            }
            SourceConfig::Synthetic {
                duration_s,
                sampling_rate,
                channels,
                ..
            } => {
                if !(duration_s * sampling_rate >= 2.0) {
                    push(
                        &format!("{base}.duration_s"),
                        "duration × rate must give at least 2 samples".into(),
                    );
                }
                if channels.is_empty() {
                    push(&format!("{base}.channels"), "no channels specified".into());
                }
            }
        }
        for (j, seg) in src.segments().iter().enumerate() {
            if !(seg.duration_s > 0.0) || seg.start_s < 0.0 {
                push(
                    &format!("{base}.segments[{j}]"),
                    format!(
                        "invalid window [start {} s, duration {} s]",
                        seg.start_s, seg.duration_s
                    ),
                );
            }
        }
    }

    if !cfg.preprocess.skip {
        if !(cfg.preprocess.high_pass_hz > 0.0
            && cfg.preprocess.high_pass_hz < cfg.preprocess.low_pass_hz)
        {
            push(
                "preprocess.high_pass_hz",
                format!(
                    "need 0 < high_pass ({}) < low_pass ({})",
                    cfg.preprocess.high_pass_hz, cfg.preprocess.low_pass_hz
                ),
            );
        }
        if let Some(order) = cfg.preprocess.fir_order {
            if order < 3 || order % 2 == 0 {
                push(
                    "preprocess.fir_order",
                    format!("must be an odd integer >= 3, got {order}"),
                );
            }
        }
    }

    if cfg.features.bands.is_empty() {
        push("features.bands", "at least one band is required".into());
    }
    for (i, band) in cfg.features.bands.iter().enumerate() {
        if let Err(e) = band.resolve() {
            push(&format!("features.bands[{i}]"), e);
        }
    }
    if !(0.0..1.0).contains(&cfg.features.welch.overlap) {
        push(
            "features.welch.overlap",
            format!("must lie in [0, 1), got {}", cfg.features.welch.overlap),
        );
    }
    if let Some(m) = cfg.features.welch.segment_len {
        if m < 8 {
            push(
                "features.welch.segment_len",
                format!("must be at least 8 samples, got {m}"),
            );
        }
    }
    let morlet = &cfg.features.morlet;
    if !(3.0 <= morlet.cycles_lo && morlet.cycles_lo <= morlet.cycles_hi) {
        push(
            "features.morlet.cycles_lo",
            format!(
                "cycle counts must satisfy 3 <= lo <= hi, got [{}, {}]",
                morlet.cycles_lo, morlet.cycles_hi
            ),
        );
    }
    if !(morlet.freq_step > 0.0) {
        push(
            "features.morlet.freq_step",
            format!("must be positive, got {}", morlet.freq_step),
        );
    }

    if !(0.0..=1.0).contains(&cfg.ga.lambda) {
        push(
            "ga.lambda",
            format!("must lie in [0, 1], got {}", cfg.ga.lambda),
        );
    }
    if cfg.strategy == Strategy::Gafs {
        if cfg.ga.mating_pool == 0 || !cfg.ga.mating_pool.is_multiple_of(2) {
            push(
                "ga.mating_pool",
                format!("must be even and positive, got {}", cfg.ga.mating_pool),
            );
        }
        if cfg.ga.population_size != 2 * cfg.ga.mating_pool {
            push(
                "ga.population_size",
                format!(
                    "must equal 2 × mating_pool, got {} with pool {}",
                    cfg.ga.population_size, cfg.ga.mating_pool
                ),
            );
        }
        if cfg.ga.mutations == 0 {
            push("ga.mutations", "must be at least 1".into());
        }
        if cfg.ga.max_generations == 0 {
            push("ga.max_generations", "must be at least 1".into());
        }
    }

    if cfg.mode == Mode::Unsupervised {
        match cfg.evaluation.k {
            None => push(
                "evaluation.k",
                "required in unsupervised mode (cluster count)".into(),
            ),
            Some(k) if k < 2 => push("evaluation.k", format!("must be at least 2, got {k}")),
            _ => {}
        }
    } else if cfg.evaluation.folds < 2 {
        push(
            "evaluation.folds",
            format!("must be at least 2, got {}", cfg.evaluation.folds),
        );
    }

    if !(0.0 < cfg.pca.variance_threshold && cfg.pca.variance_threshold <= 1.0) {
        push(
            "pca.variance_threshold",
            format!("must lie in (0, 1], got {}", cfg.pca.variance_threshold),
        );
    }
    if cfg.report_formats.is_empty() {
        push("report_formats", "at least one format is required".into());
    }

    out
}
