//! Shared domain vocabulary: frequency bands, affect labels, recordings and
//! feature matrices.
//!
//! Band order is contractual. Every matrix, CSV file and report in the crate
//! lays out band columns in [`Band::ALL`] order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;

/// Frames per recording: one band-power frame per second of a one-minute stimulus.
pub const FRAMES: usize = 60;
pub const N_BANDS: usize = 8;
pub const N_CLASSES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Band {
    Delta,
    Theta,
    AlphaLow,
    AlphaHigh,
    BetaLow,
    BetaHigh,
    GammaLow,
    GammaMid,
}

impl Band {
    pub const ALL: [Band; N_BANDS] = [
        Band::Delta,
        Band::Theta,
        Band::AlphaLow,
        Band::AlphaHigh,
        Band::BetaLow,
        Band::BetaHigh,
        Band::GammaLow,
        Band::GammaMid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Band::Delta => "delta",
            Band::Theta => "theta",
            Band::AlphaLow => "alphaLow",
            Band::AlphaHigh => "alphaHigh",
            Band::BetaLow => "betaLow",
            Band::BetaHigh => "betaHigh",
            Band::GammaLow => "gammaLow",
            Band::GammaMid => "gammaMid",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Nominal frequency range in Hz.
    ///
    /// Delta through high beta follow the headset's channel table. The alpha
    /// row (8-12 Hz) is split at 10 Hz into low/high. The two gamma bands are
    /// not tabulated by the device vendor; they are extrapolated as contiguous
    /// 10 Hz bands above 30 Hz.
    pub fn frequency_range(self) -> (f64, f64) {
        match self {
            Band::Delta => (0.1, 3.0),
            Band::Theta => (4.0, 7.0),
            Band::AlphaLow => (8.0, 10.0),
            Band::AlphaHigh => (10.0, 12.0),
            Band::BetaLow => (12.0, 15.0),
            Band::BetaHigh => (21.0, 30.0),
            Band::GammaLow => (31.0, 40.0),
            Band::GammaMid => (41.0, 50.0),
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Band::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| invalid(format!("unknown band `{s}`")))
    }
}

pub fn band_frequency_range(band: Band) -> (f64, f64) {
    band.frequency_range()
}

/// Target affective state. Integer codes are fixed; every tie in the crate
/// resolves toward the lowest code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AffectLabel {
    Happy = 0,
    Sad = 1,
    Disgust = 2,
    Peaceful = 3,
}

impl AffectLabel {
    pub const ALL: [AffectLabel; N_CLASSES] =
        [AffectLabel::Happy, AffectLabel::Sad, AffectLabel::Disgust, AffectLabel::Peaceful];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Option<Self> {
        Self::ALL.get(code).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            AffectLabel::Happy => "happy",
            AffectLabel::Sad => "sad",
            AffectLabel::Disgust => "disgust",
            AffectLabel::Peaceful => "peaceful",
        }
    }
}

impl fmt::Display for AffectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AffectLabel {
    type Err = Error;

    /// Case-insensitive; "funny" is accepted as an alias of `Happy`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "happy" | "funny" => Ok(AffectLabel::Happy),
            "sad" => Ok(AffectLabel::Sad),
            "disgust" => Ok(AffectLabel::Disgust),
            "peaceful" => Ok(AffectLabel::Peaceful),
            _ => Err(invalid(format!("unknown label `{s}`"))),
        }
    }
}

/// One participant watching one stimulus: `frames[t][band]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRecording {
    pub participant_id: u32,
    pub label: AffectLabel,
    pub frames: Vec<[f64; N_BANDS]>,
}

impl RawRecording {
    /// Time series of one band.
    pub fn band_series(&self, band: Band) -> Vec<f64> {
        self.frames.iter().map(|f| f[band.index()]).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawDataset {
    pub recordings: Vec<RawRecording>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ParticipantId { participant: u32, label: AffectLabel },
    FrameCount { participant: u32, label: AffectLabel, frames: usize },
    NonFinite { participant: u32, label: AffectLabel, t: usize, band: Band },
    Negative { participant: u32, label: AffectLabel, t: usize, band: Band },
    DuplicatePair { participant: u32, label: AffectLabel },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::ParticipantId { .. } => "participant-id",
            Violation::FrameCount { .. } => "frame-count",
            Violation::NonFinite { .. } => "non-finite",
            Violation::Negative { .. } => "negative",
            Violation::DuplicatePair { .. } => "duplicate-pair",
        }
    }
}

/// Lists every invariant violation in `ds`; empty means the dataset is valid.
pub fn validate_dataset(ds: &RawDataset) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in &ds.recordings {
        let (participant, label) = (r.participant_id, r.label);
        if participant == 0 {
            out.push(Violation::ParticipantId { participant, label });
        }
        if r.frames.len() != FRAMES {
            out.push(Violation::FrameCount { participant, label, frames: r.frames.len() });
        }
        for (t, frame) in r.frames.iter().enumerate() {
            for band in Band::ALL {
                let v = frame[band.index()];
                if !v.is_finite() {
                    out.push(Violation::NonFinite { participant, label, t, band });
                } else if v < 0.0 {
                    out.push(Violation::Negative { participant, label, t, band });
                }
            }
        }
        if !seen.insert((participant, label)) {
            out.push(Violation::DuplicatePair { participant, label });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Statistical,
    Advanced,
    Fused,
    /// Column subsets and projections (selection output, PCA/LDA scores).
    Derived,
}

impl FeatureKind {
    pub fn expected_width(self) -> Option<usize> {
        match self {
            FeatureKind::Statistical => Some(56),
            FeatureKind::Advanced => Some(64),
            FeatureKind::Fused => Some(120),
            FeatureKind::Derived => None,
        }
    }
}

/// Rows are recordings, columns are named features.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub values: Matrix,
    pub column_names: Vec<String>,
    pub participant_ids: Vec<u32>,
    pub labels: Vec<AffectLabel>,
    pub kind: FeatureKind,
}

impl FeatureMatrix {
    pub fn new(
        values: Matrix,
        column_names: Vec<String>,
        participant_ids: Vec<u32>,
        labels: Vec<AffectLabel>,
        kind: FeatureKind,
    ) -> Result<Self> {
        if column_names.len() != values.ncols() {
            return Err(Error::Dimension { expected: values.ncols(), got: column_names.len() });
        }
        if labels.len() != values.nrows() || participant_ids.len() != values.nrows() {
            return Err(Error::Dimension { expected: values.nrows(), got: labels.len() });
        }
        if let Some(w) = kind.expected_width() {
            if w != values.ncols() {
                return Err(Error::Dimension { expected: w, got: values.ncols() });
            }
        }
        let mut seen = HashSet::new();
        if let Some(dup) = column_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(invalid(format!("duplicate column name `{dup}`")));
        }
        if values.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("feature matrix contains non-finite values".into()));
        }
        Ok(Self { values, column_names, participant_ids, labels, kind })
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn label_codes(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.code()).collect()
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<FeatureMatrix> {
        if let Some(&bad) = idx.iter().find(|&&j| j >= self.ncols()) {
            return Err(invalid(format!("column index {bad} out of range")));
        }
        let names = idx.iter().map(|&j| self.column_names[j].clone()).collect();
        FeatureMatrix::new(
            self.values.select_cols(idx),
            names,
            self.participant_ids.clone(),
            self.labels.clone(),
            FeatureKind::Derived,
        )
    }

    pub fn select_rows(&self, idx: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            values: self.values.select_rows(idx),
            column_names: self.column_names.clone(),
            participant_ids: idx.iter().map(|&i| self.participant_ids[i]).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            kind: self.kind,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recording(p: u32, label: AffectLabel, frames: usize) -> RawRecording {
        RawRecording { participant_id: p, label, frames: vec![[1.0; N_BANDS]; frames] }
    }

    #[test]
    fn band_table() {
        assert_eq!(band_frequency_range(Band::Delta), (0.1, 3.0));
        assert_eq!(band_frequency_range(Band::Theta), (4.0, 7.0));
        assert_eq!(band_frequency_range(Band::GammaLow), (31.0, 40.0));
        for b in Band::ALL {
            let (lo, hi) = b.frequency_range();
            assert!(lo < hi, "{b}");
        }
        let names: Vec<_> = Band::ALL.iter().map(|b| b.name()).collect();
        assert_eq!(
            names,
            ["delta", "theta", "alphaLow", "alphaHigh", "betaLow", "betaHigh", "gammaLow", "gammaMid"]
        );
    }

    #[test]
    fn label_codes_and_aliases() {
        for (i, l) in AffectLabel::ALL.iter().enumerate() {
            assert_eq!(l.code(), i);
        }
        assert_eq!("FUNNY".parse::<AffectLabel>().unwrap(), AffectLabel::Happy);
        assert_eq!("Peaceful".parse::<AffectLabel>().unwrap(), AffectLabel::Peaceful);
        assert!("angry".parse::<AffectLabel>().is_err());
    }

    #[test]
    fn validation() {
        let mut ds = RawDataset::default();
        for p in 1..=100 {
            for l in AffectLabel::ALL {
                ds.recordings.push(recording(p, l, FRAMES));
            }
        }
        assert!(validate_dataset(&ds).is_empty());

        let short = RawDataset { recordings: vec![recording(3, AffectLabel::Happy, 59)] };
        let v = validate_dataset(&short);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind(), "frame-count");

        let dup = RawDataset {
            recordings: vec![recording(7, AffectLabel::Sad, FRAMES), recording(7, AffectLabel::Sad, FRAMES)],
        };
        let v = validate_dataset(&dup);
        assert_eq!(v, vec![Violation::DuplicatePair { participant: 7, label: AffectLabel::Sad }]);
    }

    #[test]
    fn feature_width_enforced() {
        let m = Matrix::zeros(1, 3);
        let names = vec!["a".into(), "b".into(), "c".into()];
        let err = FeatureMatrix::new(m.clone(), names.clone(), vec![1], vec![AffectLabel::Sad], FeatureKind::Statistical);
        assert!(err.is_err());
        assert!(FeatureMatrix::new(m, names, vec![1], vec![AffectLabel::Sad], FeatureKind::Derived).is_ok());
    }
}
