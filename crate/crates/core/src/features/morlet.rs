//! Band power from complex Morlet wavelet convolution.
//!
//! For each grid frequency inside the band a complex Morlet wavelet
//! `e^{2iπft}·e^{−t²/(2σ²)}` with `σ = n/(2πf)` is built, its spectrum
//! normalized to unit peak, and convolved with the signal through a
//! frequency-domain product. Squared magnitudes are summed over the band's
//! grid and time-averaged over the samples unaffected by the edges.

use super::{Band, FeatureError};
use crate::dsp::{fft_complex, fft_real, ifft};
use rustfft::num_complex::Complex64;
use std::collections::HashMap;

/// Cycle-count configuration for the Morlet wavelets. The number of cycles
/// `n` is interpolated linearly from `cycles_lo` at the lowest analysis
/// frequency to `cycles_hi` at the highest; `anchor` pins that global
/// frequency range when features over several bands must share one cycle
/// ramp. `fixed_cycles` overrides the ramp with a constant.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct MorletConfig {
    pub cycles_lo: f64,
    pub cycles_hi: f64,
    pub freq_step: f64,
    #[serde(default)]
    pub fixed_cycles: Option<f64>,
    #[serde(default)]
    pub anchor: Option<(f64, f64)>,
}

impl Default for MorletConfig {
    fn default() -> Self {
        Self {
            cycles_lo: 3.0,
            cycles_hi: 7.0,
            freq_step: 0.5,
            fixed_cycles: None,
            anchor: None,
        }
    }
}

impl MorletConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if !(3.0 <= self.cycles_lo && self.cycles_lo <= self.cycles_hi) {
            return Err(FeatureError::Config(format!(
                "cycle counts must satisfy 3 <= lo <= hi, got [{}, {}]",
                self.cycles_lo, self.cycles_hi
            )));
        }
        if !(self.freq_step > 0.0) {
            return Err(FeatureError::Config(format!(
                "freq_step must be positive, got {}",
                self.freq_step
            )));
        }
        Ok(())
    }

    /// Anchor the cycle ramp to the full frequency range of a band list.
    pub fn anchored_to(mut self, bands: &[Band]) -> Self {
        if self.anchor.is_none() && !bands.is_empty() {
            let lo = bands.iter().map(|b| b.lo).fold(f64::INFINITY, f64::min);
            let hi = bands.iter().map(|b| b.hi).fold(f64::NEG_INFINITY, f64::max);
            self.anchor = Some((lo, hi));
        }
        self
    }

    fn cycles_at(&self, f: f64, band: &Band) -> f64 {
        if let Some(n) = self.fixed_cycles {
            return n;
        }
        let (lo, hi) = self.anchor.unwrap_or((band.lo, band.hi));
        if hi <= lo {
            return self.cycles_lo;
        }
        let frac = ((f - lo) / (hi - lo)).clamp(0.0, 1.0);
        self.cycles_lo + (self.cycles_hi - self.cycles_lo) * frac
    }
}

/// Grid frequencies covering `[band.lo, band.hi]` at `freq_step` spacing.
fn band_grid(band: &Band, step: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut f = band.lo;
    while f <= band.hi + 1e-9 {
        grid.push(f);
        f += step;
    }
    grid
}

/// Morlet-wavelet band power: time-average over the edge-free samples of the
/// squared convolution magnitudes summed over the band grid.
pub fn morlet_psd(
    x: &[f64],
    rate: f64,
    band: &Band,
    cfg: &MorletConfig,
) -> Result<f64, FeatureError> {
    band.validate()?;
    cfg.validate()?;
    if band.hi >= rate / 2.0 {
        return Err(FeatureError::Config(format!(
            "band {} [{}, {}] reaches Nyquist ({} Hz)",
            band.name,
            band.lo,
            band.hi,
            rate / 2.0
        )));
    }
    let n = x.len();
    let grid = band_grid(band, cfg.freq_step);
    let mut power = vec![0.0; n];
    let mut max_half_width = 0usize;
    let mut signal_ffts: HashMap<usize, Vec<Complex64>> = HashMap::new();

    for &f in &grid {
        let cycles = cfg.cycles_at(f, band);
        let sigma = cycles / (2.0 * std::f64::consts::PI * f);
        let half_width = (4.0 * sigma * rate).ceil() as usize;
        let wavelet_len = 2 * half_width + 1;
        if wavelet_len > n {
            return Err(FeatureError::Input(format!(
                "wavelet support of {wavelet_len} samples at {f} Hz exceeds signal length {n}"
            )));
        }
        max_half_width = max_half_width.max(half_width);

        let wavelet: Vec<Complex64> = (0..wavelet_len)
            .map(|i| {
                let t = (i as f64 - half_width as f64) / rate;
                let envelope = (-t * t / (2.0 * sigma * sigma)).exp();
                Complex64::from_polar(envelope, 2.0 * std::f64::consts::PI * f * t)
            })
            .collect();

        let nfft = (n + wavelet_len - 1).next_power_of_two();
        let w_spec = fft_complex(&wavelet, nfft);
        let peak = w_spec.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let x_spec = signal_ffts
            .entry(nfft)
            .or_insert_with(|| fft_real(x, nfft));
        let product: Vec<Complex64> = x_spec
            .iter()
            .zip(&w_spec)
            .map(|(a, b)| a * b / peak)
            .collect();
        let conv = ifft(&product);
        for (t, p) in power.iter_mut().enumerate() {
            *p += conv[t + half_width].norm_sqr();
        }
    }

    if n <= 2 * max_half_width {
        return Err(FeatureError::Input(format!(
            "no samples clear of the {max_half_width}-sample wavelet edges in a {n}-sample signal"
        )));
    }
    let valid = &power[max_half_width..n - max_half_width];
    Ok(valid.iter().sum::<f64>() / valid.len() as f64)
}
