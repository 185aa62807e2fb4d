//! Welch PSD estimation: overlapping windowed periodograms averaged into a
//! one-sided density, integrated over a frequency band.

use super::{Band, FeatureError};
use crate::dsp::{fft_real, WindowKind};

/// Segmentation parameters for the Welch estimate. `overlap` is the fraction
/// of a segment shared with its successor (0.5 gives the K = M/2 hop).
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct WelchConfig {
    pub segment_len: usize,
    pub overlap: f64,
    pub window: WindowKind,
}

impl WelchConfig {
    pub fn new(segment_len: usize) -> Self {
        Self {
            segment_len,
            overlap: 0.5,
            window: WindowKind::Hamming,
        }
    }

    /// Default 1-second segments, clamped to the signal length.
    pub fn for_signal(rate: f64, n_samples: usize) -> Self {
        Self::new((rate.round() as usize).clamp(8, n_samples.max(8)))
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.segment_len < 8 {
            return Err(FeatureError::Config(format!(
                "segment_len must be at least 8, got {}",
                self.segment_len
            )));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(FeatureError::Config(format!(
                "overlap must lie in [0, 1), got {}",
                self.overlap
            )));
        }
        Ok(())
    }
}

/// One-sided Welch density over the `0..=M/2` bins, as `(bin centres in Hz,
/// density values)`. Integrating `density · rate/M` over all bins recovers
/// the signal power.
pub fn welch_spectrum(
    x: &[f64],
    rate: f64,
    cfg: &WelchConfig,
) -> Result<(Vec<f64>, Vec<f64>), FeatureError> {
    cfg.validate()?;
    let m = cfg.segment_len;
    if m > x.len() {
        return Err(FeatureError::Input(format!(
            "segment length {m} exceeds signal length {}",
            x.len()
        )));
    }
    let hop = ((m as f64) * (1.0 - cfg.overlap)).round().max(1.0) as usize;
    let n_segments = (x.len() - m) / hop + 1;
    let window = cfg.window.taps(m);
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let n_bins = m / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    for j in 0..n_segments {
        let seg = &x[j * hop..j * hop + m];
        let tapered: Vec<f64> = seg.iter().zip(&window).map(|(v, w)| v * w).collect();
        let spectrum = fft_real(&tapered, m);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += spectrum[k].norm_sqr();
        }
    }

    let mut density = vec![0.0; n_bins];
    for k in 0..n_bins {
        // one-sided: interior bins carry their mirror's power too
        let fold = if k == 0 || 2 * k == m { 1.0 } else { 2.0 };
        density[k] = fold * acc[k] / (n_segments as f64 * window_power * rate);
    }
    let freqs = (0..n_bins).map(|k| k as f64 * rate / m as f64).collect();
    Ok((freqs, density))
}

/// Band power from the Welch density: the average periodogram integrated
/// (bin value × bin width) over the bins whose centre lies in
/// `[band.lo, band.hi]`, both endpoints included.
pub fn welch_psd(
    x: &[f64],
    rate: f64,
    band: &Band,
    cfg: &WelchConfig,
) -> Result<f64, FeatureError> {
    band.validate()?;
    if band.hi >= rate / 2.0 {
        return Err(FeatureError::Config(format!(
            "band {} [{}, {}] reaches Nyquist ({} Hz)",
            band.name,
            band.lo,
            band.hi,
            rate / 2.0
        )));
    }
    let (freqs, density) = welch_spectrum(x, rate, cfg)?;
    let bin_width = rate / cfg.segment_len as f64;
    Ok(freqs
        .iter()
        .zip(&density)
        .filter(|(f, _)| **f >= band.lo && **f <= band.hi)
        .map(|(_, d)| d * bin_width)
        .sum())
}
