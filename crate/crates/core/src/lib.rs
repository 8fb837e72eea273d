//! EEG band-power affective-state recognition.
//!
//! The crate covers the whole path from per-second band-power recordings to
//! evaluated classifiers:
//!
//! * [`synth`] generates deterministic synthetic recordings,
//! * [`ingest`] reads/writes the CSV formats, clips outliers and min-max scales,
//! * [`stats`] and [`advanced`] extract the 56 statistical and 64 transform
//!   features per recording (fused to 120),
//! * [`selection`] ranks features by mRMR or forest importance,
//! * [`dimred`] fits PCA and LDA,
//! * [`classify`] trains GINI trees, random forests, Gaussian NB and perceptrons,
//! * [`evaluate`] splits, cross-validates and scores them, and [`plot`] draws ROC curves.

pub mod advanced;
pub mod classify;
pub mod dimred;
pub mod error;
pub mod evaluate;
pub mod ingest;
pub mod matrix;
pub mod model;
pub mod pipeline;
pub mod plot;
pub mod selection;
pub mod stats;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use model::{AffectLabel, Band, FeatureKind, FeatureMatrix, RawDataset, RawRecording};
