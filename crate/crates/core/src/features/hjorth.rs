//! Hjorth parameters: activity (variance), mobility and complexity, the
//! time-domain trio carrying frequency information through derivatives.

use super::FeatureError;

/// Unbiased variance of the signal.
pub fn hjorth_activity(x: &[f64]) -> Result<f64, FeatureError> {
    if x.len() < 2 {
        return Err(FeatureError::Input(format!(
            "activity needs at least 2 samples, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    Ok(x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
}

/// Forward difference scaled by the sampling rate.
fn derivative(x: &[f64], rate: f64) -> Vec<f64> {
    x.windows(2).map(|w| (w[1] - w[0]) * rate).collect()
}

/// `sqrt(activity(x′) / activity(x))` — the normalized mean frequency.
pub fn hjorth_mobility(x: &[f64], rate: f64) -> Result<f64, FeatureError> {
    if x.len() < 3 {
        return Err(FeatureError::Input(format!(
            "mobility needs at least 3 samples, got {}",
            x.len()
        )));
    }
    let act = hjorth_activity(x)?;
    if !(act > 0.0) {
        return Err(FeatureError::Input(
            "mobility of a zero-activity signal".into(),
        ));
    }
    let act_d = hjorth_activity(&derivative(x, rate))?;
    Ok((act_d / act).sqrt())
}

/// `mobility(x′) / mobility(x)` — the frequency-change measure.
pub fn hjorth_complexity(x: &[f64], rate: f64) -> Result<f64, FeatureError> {
    if x.len() < 4 {
        return Err(FeatureError::Input(format!(
            "complexity needs at least 4 samples, got {}",
            x.len()
        )));
    }
    let mob = hjorth_mobility(x, rate)?;
    if !(mob > 0.0) {
        return Err(FeatureError::Input(
            "complexity of a zero-mobility signal".into(),
        ));
    }
    Ok(hjorth_mobility(&derivative(x, rate), rate)? / mob)
}
