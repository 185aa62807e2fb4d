//! FIR bandpass / notch filtering and per-channel z-score normalization.
//!
//! All filters are linear-phase windowed-sinc designs (Hamming window),
//! applied forward with group-delay compensation so the output length equals
//! the input length; edge samples see the signal zero-padded.

use crate::dsp::{convolve_same, WindowKind};
use crate::ingest::{IngestError, Recording};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("filter configuration: {0}")]
    Config(String),
    #[error("channel '{channel}' has zero sample variance")]
    DegenerateChannel { channel: String },
    #[error(transparent)]
    Recording(#[from] IngestError),
}

/// Bandpass + notch parameters. `fir_order` of `None` picks the default
/// order per operation: `odd(3·rate/high_pass_cutoff)` for the bandpass and
/// `odd(8·rate/notch_bandwidth)` for the notch, both clamped to
/// `sample_count − 1`.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FilterSpec {
    pub high_pass_cutoff: f64,
    pub low_pass_cutoff: f64,
    pub notch_freq: f64,
    pub notch_bandwidth: f64,
    pub fir_order: Option<usize>,
}

impl Default for FilterSpec {
    /// The 0.5–45 Hz bandpass with a 50 Hz notch used on both datasets.
    fn default() -> Self {
        Self {
            high_pass_cutoff: 0.5,
            low_pass_cutoff: 45.0,
            notch_freq: 50.0,
            notch_bandwidth: 1.0,
            fir_order: None,
        }
    }
}

impl FilterSpec {
    pub fn validate(&self, sampling_rate: f64) -> Result<(), PreprocessError> {
        let nyquist = sampling_rate / 2.0;
        if !(self.high_pass_cutoff > 0.0 && self.high_pass_cutoff < self.low_pass_cutoff) {
            return Err(PreprocessError::Config(format!(
                "need 0 < high_pass ({}) < low_pass ({})",
                self.high_pass_cutoff, self.low_pass_cutoff
            )));
        }
        if self.low_pass_cutoff >= nyquist {
            return Err(PreprocessError::Config(format!(
                "low_pass cutoff {} Hz is at or above Nyquist ({nyquist} Hz)",
                self.low_pass_cutoff
            )));
        }
        if self.notch_freq >= nyquist {
            return Err(PreprocessError::Config(format!(
                "notch frequency {} Hz is at or above Nyquist ({nyquist} Hz)",
                self.notch_freq
            )));
        }
        if !(self.notch_bandwidth > 0.0) {
            return Err(PreprocessError::Config(format!(
                "notch bandwidth must be positive, got {}",
                self.notch_bandwidth
            )));
        }
        if let Some(order) = self.fir_order {
            if order < 3 || order % 2 == 0 {
                return Err(PreprocessError::Config(format!(
                    "fir_order must be an odd integer >= 3, got {order}"
                )));
            }
        }
        Ok(())
    }
}

fn clamp_odd_order(wanted: usize, n_samples: usize) -> usize {
    let mut order = wanted.min(n_samples.saturating_sub(1)).max(3);
    if order.is_multiple_of(2) {
        order -= 1;
    }
    order.max(3)
}

/// Unity-DC-gain windowed-sinc lowpass; `cutoff` in cycles/sample.
fn lowpass_taps(cutoff: f64, order: usize) -> Vec<f64> {
    let omega = 2.0 * std::f64::consts::PI * cutoff;
    let center = (order - 1) as f64 / 2.0;
    let mut taps: Vec<f64> = (0..order)
        .map(|n| {
            let x = n as f64 - center;
            let sinc = if x == 0.0 {
                omega / std::f64::consts::PI
            } else {
                (omega * x).sin() / (std::f64::consts::PI * x)
            };
            sinc * WindowKind::Hamming.coefficient(n, order)
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= dc;
    }
    taps
}

/// Bandpass taps for `spec` at the given rate, as a difference of two
/// unity-gain lowpasses.
pub fn bandpass_taps(spec: &FilterSpec, sampling_rate: f64, n_samples: usize) -> Vec<f64> {
    let order = spec.fir_order.unwrap_or_else(|| {
        clamp_odd_order(
            (3.0 * sampling_rate / spec.high_pass_cutoff).round() as usize,
            n_samples,
        )
    });
    let order = clamp_odd_order(order, n_samples);
    let hi = lowpass_taps(spec.low_pass_cutoff / sampling_rate, order);
    let lo = lowpass_taps(spec.high_pass_cutoff / sampling_rate, order);
    hi.iter().zip(&lo).map(|(a, b)| a - b).collect()
}

/// Band-stop taps centred on `spec.notch_freq`, built by spectral inversion
/// of a narrow bandpass.
pub fn notch_taps(spec: &FilterSpec, sampling_rate: f64, n_samples: usize) -> Vec<f64> {
    let order = spec.fir_order.unwrap_or_else(|| {
        clamp_odd_order(
            (8.0 * sampling_rate / spec.notch_bandwidth).round() as usize,
            n_samples,
        )
    });
    let order = clamp_odd_order(order, n_samples);
    let half = spec.notch_bandwidth / 2.0;
    let hi = lowpass_taps((spec.notch_freq + half) / sampling_rate, order);
    let lo = lowpass_taps((spec.notch_freq - half) / sampling_rate, order);
    let mut taps: Vec<f64> = hi.iter().zip(&lo).map(|(a, b)| -(a - b)).collect();
    taps[(order - 1) / 2] += 1.0;
    taps
}

fn apply_taps(rec: &Recording, taps: &[f64]) -> Result<Recording, PreprocessError> {
    Ok(rec.map_channels(|_, xs| Ok(convolve_same(xs, taps)))?)
}

/// Linear-phase FIR bandpass over every channel.
pub fn fir_bandpass(rec: &Recording, spec: &FilterSpec) -> Result<Recording, PreprocessError> {
    spec.validate(rec.sampling_rate())?;
    let taps = bandpass_taps(spec, rec.sampling_rate(), rec.n_samples());
    apply_taps(rec, &taps)
}

/// FIR band-stop at the power-line frequency.
pub fn notch(rec: &Recording, spec: &FilterSpec) -> Result<Recording, PreprocessError> {
    spec.validate(rec.sampling_rate())?;
    let taps = notch_taps(spec, rec.sampling_rate(), rec.n_samples());
    apply_taps(rec, &taps)
}

/// Per-channel z-score: `(x − mean) / std` with the unbiased (n−1) standard
/// deviation. A zero-variance channel is an error naming the channel.
pub fn zscore(rec: &Recording) -> Result<Recording, PreprocessError> {
    let out = rec.map_channels(|label, xs| {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        if !(std > 0.0) {
            // raised as a recording error here, re-mapped below
            return Err(IngestError::InvalidRecording(label.to_string()));
        }
        Ok(xs.iter().map(|x| (x - mean) / std).collect())
    });
    match out {
        Ok(rec) => Ok(rec),
        Err(IngestError::InvalidRecording(label)) => {
            Err(PreprocessError::DegenerateChannel { channel: label })
        }
        Err(e) => Err(e.into()),
    }
}
