//! Multi-domain feature extraction: Hjorth parameters plus Welch and Morlet
//! band powers per channel, assembled into the instances × features matrix.

mod hjorth;
mod morlet;
mod welch;

pub use hjorth::{hjorth_activity, hjorth_complexity, hjorth_mobility};
pub use morlet::{morlet_psd, MorletConfig};
pub use welch::{welch_psd, welch_spectrum, WelchConfig};

use crate::ingest::InstanceSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("input: {0}")]
    Input(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("non-finite value at row {row}, electrode {electrode}, feature {feature}")]
    NonFinite {
        row: usize,
        electrode: String,
        feature: String,
    },
    #[error("row {row}, electrode {electrode}, feature {feature}: {source}")]
    Cell {
        row: usize,
        electrode: String,
        feature: String,
        #[source]
        source: Box<FeatureError>,
    },
}

/// A named frequency band `[lo, hi)` in Hz (both edges inclusive when bins
/// or grid points are matched against it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self, FeatureError> {
        let band = Self {
            name: name.into(),
            lo,
            hi,
        };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if !(0.0 < self.lo && self.lo < self.hi) {
            return Err(FeatureError::Config(format!(
                "band {} needs 0 < lo < hi, got [{}, {}]",
                self.name, self.lo, self.hi
            )));
        }
        Ok(())
    }

    // Canonical EEG rhythms. Delta is bounded below by the usual 0.5 Hz
    // high-pass edge and gamma above by the 45 Hz low-pass edge.
    pub fn delta() -> Self {
        Self::new("delta", 0.5, 4.0).expect("static band")
    }
    pub fn theta() -> Self {
        Self::new("theta", 4.0, 8.0).expect("static band")
    }
    pub fn alpha() -> Self {
        Self::new("alpha", 8.0, 13.0).expect("static band")
    }
    pub fn beta() -> Self {
        Self::new("beta", 13.0, 30.0).expect("static band")
    }
    pub fn gamma() -> Self {
        Self::new("gamma", 31.0, 45.0).expect("static band")
    }
    // Cognitive-workload sub-bands.
    pub fn theta_low() -> Self {
        Self::new("theta_l", 4.1, 5.8).expect("static band")
    }
    pub fn theta_high() -> Self {
        Self::new("theta_h", 5.9, 7.4).expect("static band")
    }
    pub fn beta_low() -> Self {
        Self::new("beta_l", 13.0, 19.9).expect("static band")
    }
    pub fn beta_high() -> Self {
        Self::new("beta_h", 20.0, 25.0).expect("static band")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Activity,
    Mobility,
    Complexity,
    PsdWelch,
    PsdMorlet,
    /// Synthetic column produced by dimensionality reduction.
    Component,
}

impl FeatureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureKind::Activity => "activity",
            FeatureKind::Mobility => "mobility",
            FeatureKind::Complexity => "complexity",
            FeatureKind::PsdWelch => "welch",
            FeatureKind::PsdMorlet => "morlet",
            FeatureKind::Component => "component",
        }
    }
}

/// Column provenance: which electrode and feature produced the value, and
/// over which band for the spectral kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub name: String,
    pub electrode: String,
    pub kind: FeatureKind,
    pub band: Option<Band>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowMeta {
    pub subject: String,
    pub condition: String,
}

/// Instances × named features, with per-column provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    columns: Vec<ColumnMeta>,
    rows: Vec<RowMeta>,
    /// Row-major values, `rows.len() × columns.len()`.
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn from_parts(
        columns: Vec<ColumnMeta>,
        rows: Vec<RowMeta>,
        values: Vec<f64>,
    ) -> Result<Self, FeatureError> {
        if values.len() != columns.len() * rows.len() {
            return Err(FeatureError::Input(format!(
                "{} values for a {}×{} matrix",
                values.len(),
                rows.len(),
                columns.len()
            )));
        }
        let mut names: Vec<&str> = columns.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(FeatureError::Input("duplicate column names".into()));
        }
        Ok(Self {
            columns,
            rows,
            values,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.n_cols()..(r + 1) * self.n_cols()]
    }

    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.n_cols() + c]
    }

    pub fn columns(&self) -> &[ColumnMeta] {
        &self.columns
    }

    pub fn rows_meta(&self) -> &[RowMeta] {
        &self.rows
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    /// Per-row condition labels.
    pub fn labels(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.condition.clone()).collect()
    }

    /// Copy of the matrix restricted to the columns with a set mask bit.
    pub fn masked(&self, mask: &[bool]) -> Result<Self, FeatureError> {
        if mask.len() != self.n_cols() {
            return Err(FeatureError::Input(format!(
                "mask of {} bits for {} columns",
                mask.len(),
                self.n_cols()
            )));
        }
        let keep: Vec<usize> = (0..self.n_cols()).filter(|&c| mask[c]).collect();
        let columns = keep.iter().map(|&c| self.columns[c].clone()).collect();
        let mut values = Vec::with_capacity(keep.len() * self.n_rows());
        for r in 0..self.n_rows() {
            let row = self.row(r);
            values.extend(keep.iter().map(|&c| row[c]));
        }
        Self::from_parts(columns, self.rows.clone(), values)
    }

    /// CSV rendering: `subject,condition` followed by one column per feature.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("subject,condition");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for (r, meta) in self.rows.iter().enumerate() {
            out.push_str(&meta.subject);
            out.push(',');
            out.push_str(&meta.condition);
            for v in self.row(r) {
                out.push(',');
                out.push_str(&format!("{v:.17e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Column/row provenance as a JSON value (the CSV sidecar).
    pub fn meta_json(&self) -> serde_json::Value {
        serde_json::json!({
            "columns": self.columns,
            "rows": self.rows,
        })
    }
}

/// Expected column count for the electrode-major layout.
pub fn expected_columns(n_electrodes: usize, n_bands: usize) -> usize {
    n_electrodes * (3 + n_bands * 2)
}

/// Assemble the data matrix: one row per recording, electrode-major columns;
/// per electrode the three Hjorth parameters, then per band the Welch and
/// Morlet powers.
pub fn build_matrix(
    instances: &InstanceSet,
    bands: &[Band],
    wcfg: &WelchConfig,
    mcfg: &MorletConfig,
) -> Result<FeatureMatrix, FeatureError> {
    let mut names: Vec<&str> = bands.iter().map(|b| b.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(FeatureError::Config("duplicate band names".into()));
    }
    for b in bands {
        b.validate()?;
    }
    wcfg.validate()?;
    let mcfg = mcfg.anchored_to(bands);
    mcfg.validate()?;

    let first = &instances.recordings()[0];
    let electrodes = first.channels().to_vec();
    let mut columns = Vec::with_capacity(expected_columns(electrodes.len(), bands.len()));
    for el in &electrodes {
        for kind in [
            FeatureKind::Activity,
            FeatureKind::Mobility,
            FeatureKind::Complexity,
        ] {
            columns.push(ColumnMeta {
                name: format!("{el}_{}", kind.as_str()),
                electrode: el.clone(),
                kind,
                band: None,
            });
        }
        for band in bands {
            for kind in [FeatureKind::PsdWelch, FeatureKind::PsdMorlet] {
                columns.push(ColumnMeta {
                    name: format!("{el}_{}_{}", kind.as_str(), band.name),
                    electrode: el.clone(),
                    kind,
                    band: Some(band.clone()),
                });
            }
        }
    }

    let row_results: Vec<Result<Vec<f64>, FeatureError>> = instances
        .recordings()
        .par_iter()
        .enumerate()
        .map(|(row, rec)| {
            let rate = rec.sampling_rate();
            let mut out = Vec::with_capacity(columns.len());
            for (ch, el) in rec.channels().iter().enumerate() {
                let xs = rec.channel(ch);
                let cell = |feature: &str, res: Result<f64, FeatureError>| {
                    res.map_err(|e| FeatureError::Cell {
                        row,
                        electrode: el.clone(),
                        feature: feature.to_string(),
                        source: Box::new(e),
                    })
                };
                out.push(cell("activity", hjorth_activity(xs))?);
                out.push(cell("mobility", hjorth_mobility(xs, rate))?);
                out.push(cell("complexity", hjorth_complexity(xs, rate))?);
                for band in bands {
                    out.push(cell(
                        &format!("welch_{}", band.name),
                        welch_psd(xs, rate, band, wcfg),
                    )?);
                    out.push(cell(
                        &format!("morlet_{}", band.name),
                        morlet_psd(xs, rate, band, &mcfg),
                    )?);
                }
            }
            Ok(out)
        })
        .collect();

    let mut values = Vec::with_capacity(columns.len() * instances.len());
    let mut rows = Vec::with_capacity(instances.len());
    for (row, (res, rec)) in row_results
        .into_iter()
        .zip(instances.recordings())
        .enumerate()
    {
        let row_values = res?;
        if let Some(c) = row_values.iter().position(|v| !v.is_finite()) {
            return Err(FeatureError::NonFinite {
                row,
                electrode: columns[c].electrode.clone(),
                feature: columns[c].name.clone(),
            });
        }
        values.extend(row_values);
        rows.push(RowMeta {
            subject: rec.subject().to_string(),
            condition: rec.condition().to_string(),
        });
    }

    FeatureMatrix::from_parts(columns, rows, values)
}
