//! EEG feature-selection pipeline: multi-domain feature extraction from
//! multichannel recordings, followed by a wrapper genetic algorithm over
//! binary feature masks.
//!
//! The crate is organised along the pipeline stages:
//!
//! * [`ingest`] — EDF / CSV loading, task segmentation, synthetic signals.
//! * [`preprocess`] — FIR bandpass + notch filtering and z-score
//!   normalization.
//! * [`features`] — Hjorth parameters, Welch PSD and Morlet-wavelet PSD per
//!   band, assembled into an instances × features matrix.
//! * [`learners`] — the wrapped models (linear SVM with k-fold CV, k-means
//!   with city-block distance), silhouette, PCA baseline and report metrics.
//! * [`ga`] — binary-mask genetic algorithm with three fitness families and
//!   dynamic stopping criteria.

pub mod dsp;
pub mod features;
pub mod ga;
pub mod ingest;
pub mod learners;
pub mod preprocess;

pub use features::{Band, FeatureKind, FeatureMatrix, MorletConfig, WelchConfig};
pub use ga::{FitnessFamily, GaConfig, GaMode, RunReport, StopReason};
pub use ingest::{InstanceSet, Recording};
pub use learners::LabeledData;
pub use preprocess::FilterSpec;
