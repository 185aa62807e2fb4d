//! Loading multichannel recordings (EDF, CSV), task segmentation and
//! synthetic signal generation.

mod csv_loader;
mod edf;

pub use csv_loader::load_csv;
pub use edf::load_edf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed file content; `offset` is the byte position when known.
    #[error("parse error at byte {offset:?}: {message}")]
    Parse { offset: Option<u64>, message: String },
    /// Structurally valid header but inconsistent payload.
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("CSV error at row {row}, column {col}: {message}")]
    Csv {
        row: usize,
        col: usize,
        message: String,
    },
    #[error("invalid recording: {0}")]
    InvalidRecording(String),
    #[error("component frequency {freq} Hz is at or above Nyquist ({nyquist} Hz)")]
    Nyquist { freq: f64, nyquist: f64 },
}

/// One multichannel sampled signal with a condition label.
///
/// All channels share the sample count and the sampling rate; channel labels
/// are unique. Values are microvolts for raw data, dimensionless after
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    channels: Vec<String>,
    samples: Vec<Vec<f64>>,
    sampling_rate: f64,
    condition: String,
    subject: String,
}

impl Recording {
    /// Build a recording, enforcing the type invariants: equal per-channel
    /// sample counts of at least 2, positive sampling rate, unique labels.
    pub fn new(
        channels: Vec<String>,
        samples: Vec<Vec<f64>>,
        sampling_rate: f64,
    ) -> Result<Self, IngestError> {
        if channels.len() != samples.len() {
            return Err(IngestError::InvalidRecording(format!(
                "{} channel labels but {} sample rows",
                channels.len(),
                samples.len()
            )));
        }
        if channels.is_empty() {
            return Err(IngestError::InvalidRecording("no channels".into()));
        }
        if !(sampling_rate > 0.0) {
            return Err(IngestError::InvalidRecording(format!(
                "sampling rate must be positive, got {sampling_rate}"
            )));
        }
        let n = samples[0].len();
        if n < 2 {
            return Err(IngestError::InvalidRecording(format!(
                "channels must hold at least 2 samples, got {n}"
            )));
        }
        if let Some(bad) = samples.iter().position(|s| s.len() != n) {
            return Err(IngestError::InvalidRecording(format!(
                "channel '{}' has {} samples, expected {}",
                channels[bad],
                samples[bad].len(),
                n
            )));
        }
        let mut seen = HashSet::new();
        for label in &channels {
            if !seen.insert(label.as_str()) {
                return Err(IngestError::InvalidRecording(format!(
                    "duplicate channel label '{label}'"
                )));
            }
        }
        Ok(Self {
            channels,
            samples,
            sampling_rate,
            condition: String::new(),
            subject: String::new(),
        })
    }

    pub fn with_condition(mut self, condition: impl Into<String>) -> Self {
        self.condition = condition.into();
        self
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = subject.into();
        self
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn n_samples(&self) -> usize {
        self.samples[0].len()
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.samples[idx]
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn condition(&self) -> &str {
        &self.condition
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    /// Replace every channel through `f`, keeping labels and rate.
    pub(crate) fn map_channels(
        &self,
        mut f: impl FnMut(&str, &[f64]) -> Result<Vec<f64>, IngestError>,
    ) -> Result<Self, IngestError> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for (label, xs) in self.channels.iter().zip(&self.samples) {
            samples.push(f(label, xs)?);
        }
        let mut out = Recording::new(self.channels.clone(), samples, self.sampling_rate)?;
        out.condition = self.condition.clone();
        out.subject = self.subject.clone();
        Ok(out)
    }

    /// Cut a fixed window out of the recording (cue-aligned task epochs).
    pub fn segment(&self, start_s: f64, duration_s: f64) -> Result<Self, IngestError> {
        let start = (start_s * self.sampling_rate).round() as isize;
        let len = (duration_s * self.sampling_rate).round() as isize;
        let end = start + len;
        if start < 0 || len < 2 || end as usize > self.n_samples() {
            return Err(IngestError::InvalidRecording(format!(
                "segment [{start_s} s, +{duration_s} s] outside recording of {} samples",
                self.n_samples()
            )));
        }
        let samples = self
            .samples
            .iter()
            .map(|s| s[start as usize..end as usize].to_vec())
            .collect();
        let mut out = Recording::new(self.channels.clone(), samples, self.sampling_rate)?;
        out.condition = self.condition.clone();
        out.subject = self.subject.clone();
        Ok(out)
    }
}

/// A set of task recordings sharing channel layout and sampling rate.
#[derive(Debug, Clone)]
pub struct InstanceSet {
    recordings: Vec<Recording>,
}

impl InstanceSet {
    /// Validates that every recording carries the identical channel list
    /// (same order), one sampling rate, and that at least 2 distinct
    /// condition labels are present.
    pub fn new(recordings: Vec<Recording>) -> Result<Self, IngestError> {
        let first = recordings
            .first()
            .ok_or_else(|| IngestError::InvalidRecording("empty instance set".into()))?;
        let channels = first.channels.clone();
        let rate = first.sampling_rate;
        for (i, rec) in recordings.iter().enumerate() {
            if rec.channels != channels {
                return Err(IngestError::InvalidRecording(format!(
                    "recording {i} channel list differs from the first recording"
                )));
            }
            if rec.sampling_rate != rate {
                return Err(IngestError::InvalidRecording(format!(
                    "recording {i} sampling rate {} differs from {}",
                    rec.sampling_rate, rate
                )));
            }
        }
        let conditions: HashSet<&str> = recordings.iter().map(|r| r.condition.as_str()).collect();
        if conditions.len() < 2 {
            return Err(IngestError::InvalidRecording(format!(
                "instance set needs at least 2 distinct conditions, got {}",
                conditions.len()
            )));
        }
        Ok(Self { recordings })
    }

    pub fn recordings(&self) -> &[Recording] {
        &self.recordings
    }

    pub fn len(&self) -> usize {
        self.recordings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recordings.is_empty()
    }

    /// Distinct condition labels, sorted.
    pub fn conditions(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .recordings
            .iter()
            .map(|r| r.condition.clone())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        v.sort();
        v
    }
}

/// One sinusoid in a synthetic channel: amplitude, frequency (Hz), phase.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Sinusoid {
    pub amplitude: f64,
    pub freq_hz: f64,
    pub phase: f64,
}

/// Channel recipe for [`synthesize`]: a sum of sinusoids plus Gaussian noise.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ChannelSpec {
    pub label: String,
    pub components: Vec<Sinusoid>,
    pub noise_std: f64,
}

/// Deterministic synthetic recording: each channel is
/// `Σ A·sin(2πft + φ) + N(0, noise_std²)`, seeded per call.
pub fn synthesize(
    spec: &[ChannelSpec],
    duration_s: f64,
    rate: f64,
    seed: u64,
) -> Result<Recording, IngestError> {
    let n = (duration_s * rate).round() as usize;
    if n < 2 {
        return Err(IngestError::InvalidRecording(format!(
            "duration·rate must give at least 2 samples, got {n}"
        )));
    }
    let nyquist = rate / 2.0;
    for ch in spec {
        for c in &ch.components {
            if c.freq_hz >= nyquist {
                return Err(IngestError::Nyquist {
                    freq: c.freq_hz,
                    nyquist,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut channels = Vec::with_capacity(spec.len());
    let mut samples = Vec::with_capacity(spec.len());
    for ch in spec {
        let mut xs = vec![0.0; n];
        for (t, x) in xs.iter_mut().enumerate() {
            let time = t as f64 / rate;
            for c in &ch.components {
                *x += c.amplitude * (2.0 * std::f64::consts::PI * c.freq_hz * time + c.phase).sin();
            }
        }
        if ch.noise_std > 0.0 {
            let normal = Normal::new(0.0, ch.noise_std).expect("std is positive");
            for x in &mut xs {
                *x += normal.sample(&mut rng);
            }
        }
        channels.push(ch.label.clone());
        samples.push(xs);
    }
    Ok(Recording::new(channels, samples, rate)?.with_subject("synthetic"))
}
