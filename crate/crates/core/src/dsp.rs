//! Shared DSP primitives: window tapers and FFT-based convolution.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Taper applied to FIR designs and Welch segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hamming,
    Hann,
    Rectangular,
}

impl WindowKind {
    /// Window coefficient at index `i` of an `n`-point taper.
    pub fn coefficient(self, i: usize, n: usize) -> f64 {
        if n == 1 {
            return 1.0;
        }
        let x = i as f64 / (n - 1) as f64;
        match self {
            WindowKind::Hamming => 0.54 - 0.46 * (2.0 * std::f64::consts::PI * x).cos(),
            WindowKind::Hann => 0.5 - 0.5 * (2.0 * std::f64::consts::PI * x).cos(),
            WindowKind::Rectangular => 1.0,
        }
    }

    pub fn taps(self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.coefficient(i, n)).collect()
    }
}

fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Forward FFT of a real signal zero-padded to `nfft`.
pub fn fft_real(signal: &[f64], nfft: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    buf.resize(nfft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    buf
}

/// Forward FFT of a complex signal zero-padded to `nfft`.
pub fn fft_complex(signal: &[Complex64], nfft: usize) -> Vec<Complex64> {
    let mut buf = signal.to_vec();
    buf.resize(nfft, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    buf
}

/// Inverse FFT, including the 1/n scaling rustfft leaves out.
pub fn ifft(spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spectrum.to_vec();
    let n = buf.len();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Linear convolution of `signal` with real taps, trimmed to "same" length
/// with the group delay of a symmetric odd-length filter compensated
/// (shift by (taps−1)/2). The signal is zero-padded at both edges.
pub fn convolve_same(signal: &[f64], taps: &[f64]) -> Vec<f64> {
    let n = signal.len();
    let m = taps.len();
    let full = n + m - 1;
    let nfft = next_pow2(full);
    let sx = fft_real(signal, nfft);
    let sh = fft_real(taps, nfft);
    let prod: Vec<Complex64> = sx.iter().zip(&sh).map(|(a, b)| a * b).collect();
    let conv = ifft(&prod);
    let delay = (m - 1) / 2;
    (0..n).map(|i| conv[i + delay].re).collect()
}

/// Complex frequency response of an FIR filter at frequency `freq_hz`.
pub fn frequency_response(taps: &[f64], freq_hz: f64, rate: f64) -> Complex64 {
    let omega = 2.0 * std::f64::consts::PI * freq_hz / rate;
    taps.iter()
        .enumerate()
        .map(|(k, &h)| Complex64::from_polar(h, -omega * k as f64))
        .sum()
}
