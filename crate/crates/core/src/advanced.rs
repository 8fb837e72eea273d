//! Transform-derived band summaries (64-column advanced matrix) and the
//! statistical/advanced feature fusion.
//!
//! Each transform is reduced to one scalar per band. Every summary is a ratio
//! or a normalized distribution, so it is unchanged when the signal is
//! multiplied by a positive gain.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{Band, FeatureKind, FeatureMatrix, RawDataset};
use crate::stats::shannon_bits;
use crate::transform::{dct2, dwt_haar, fft, stft, wvd, zero_pad_pow2};

pub const DWT_LEVELS: usize = 3;
pub const DWT_EPS: f64 = 1e-12;
/// Leading DCT coefficients counted as "compacted" energy.
pub const DCT_HEAD: usize = 8;

pub const SUMMARY_NAMES: [&str; 8] = [
    "stft_entropy",
    "dwt_ratio",
    "dct_compaction",
    "fft_dominance",
    "wvd_entropy",
    "mix_a",
    "mix_b",
    "mix_c",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvancedSummaries {
    /// Entropy (bits) of the time-averaged, normalized STFT magnitude spectrum.
    pub stft_entropy: f64,
    /// `ln((detail energy + eps) / (approx energy + eps))`, Haar, 3 levels.
    pub dwt_ratio: f64,
    /// Share of energy in the first 8 orthonormal DCT-II coefficients.
    pub dct_compaction: f64,
    /// Largest non-DC one-sided FFT magnitude over the sum of non-DC magnitudes.
    pub fft_dominance: f64,
    /// Entropy (bits) of the normalized absolute Wigner-Ville matrix.
    pub wvd_entropy: f64,
    /// `fft_dominance * dct_compaction`
    pub mix_a: f64,
    /// `stft_entropy - wvd_entropy`
    pub mix_b: f64,
    /// `dwt_ratio * fft_dominance`
    pub mix_c: f64,
}

impl AdvancedSummaries {
    pub fn to_array(self) -> [f64; 8] {
        [
            self.stft_entropy,
            self.dwt_ratio,
            self.dct_compaction,
            self.fft_dominance,
            self.wvd_entropy,
            self.mix_a,
            self.mix_b,
            self.mix_c,
        ]
    }

    fn with_mixtures(stft_entropy: f64, dwt_ratio: f64, dct_compaction: f64, fft_dominance: f64, wvd_entropy: f64) -> Self {
        Self {
            stft_entropy,
            dwt_ratio,
            dct_compaction,
            fft_dominance,
            wvd_entropy,
            mix_a: fft_dominance * dct_compaction,
            mix_b: stft_entropy - wvd_entropy,
            mix_c: dwt_ratio * fft_dominance,
        }
    }
}

/// Computes the eight summaries of one band series.
///
/// A constant series (including all-zero) takes fixed values: entropies and
/// FFT dominance 0, DCT compaction 1, and the DWT ratio with zero detail
/// energy, `ln(eps / (approx energy + eps))`.
pub fn advanced_summaries(x: &[f64]) -> Result<AdvancedSummaries> {
    if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("advanced summaries need finite, nonempty input".into()));
    }
    let padded = zero_pad_pow2(x);
    let levels = DWT_LEVELS.min(padded.len().trailing_zeros() as usize).max(1);
    let coeffs = dwt_haar(&padded, levels)?;

    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        let dwt_ratio = (DWT_EPS / (coeffs.approx_energy() + DWT_EPS)).ln();
        return Ok(AdvancedSummaries::with_mixtures(0.0, dwt_ratio, 1.0, 0.0, 0.0));
    }

    let stft_entropy = shannon_bits(stft(x).time_average().into_iter());

    let dwt_ratio = ((coeffs.detail_energy() + DWT_EPS) / (coeffs.approx_energy() + DWT_EPS)).ln();

    let c = dct2(x);
    let total: f64 = c.iter().map(|v| v * v).sum();
    let head: f64 = c.iter().take(DCT_HEAD).map(|v| v * v).sum();
    let dct_compaction = head / total;

    let mags = fft(&padded)?.magnitudes();
    let one_sided = &mags[1..=padded.len() / 2];
    let ac_sum: f64 = one_sided.iter().sum();
    let fft_dominance = if ac_sum > 0.0 {
        one_sided.iter().copied().fold(0.0, f64::max) / ac_sum
    } else {
        0.0
    };

    let tf = wvd(&padded)?;
    let wvd_entropy = shannon_bits(tf.values.iter().flatten().map(|v| v.abs()));

    Ok(AdvancedSummaries::with_mixtures(stft_entropy, dwt_ratio, dct_compaction, fft_dominance, wvd_entropy))
}

pub fn advanced_column_names() -> Vec<String> {
    Band::ALL
        .iter()
        .flat_map(|b| SUMMARY_NAMES.iter().map(move |s| format!("adv:{b}:{s}")))
        .collect()
}

/// One row per recording: 8 bands × 8 summaries, band-major.
pub fn extract_advanced_features(ds: &RawDataset) -> Result<FeatureMatrix> {
    let rows: Vec<Vec<f64>> = ds
        .recordings
        .par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let mut row = Vec::with_capacity(64);
            for b in Band::ALL {
                row.extend(advanced_summaries(&r.band_series(b))?.to_array());
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let values = if rows.is_empty() { Matrix::zeros(0, 64) } else { Matrix::from_rows(&rows)? };
    FeatureMatrix::new(
        values,
        advanced_column_names(),
        ds.recordings.iter().map(|r| r.participant_id).collect(),
        ds.recordings.iter().map(|r| r.label).collect(),
        FeatureKind::Advanced,
    )
}

/// Feature-level fusion: statistical block then advanced block, 120 columns.
pub fn fuse(stat: &FeatureMatrix, adv: &FeatureMatrix) -> Result<FeatureMatrix> {
    if stat.kind != FeatureKind::Statistical || adv.kind != FeatureKind::Advanced {
        return Err(Error::InvalidArgument("fuse expects a statistical and an advanced matrix".into()));
    }
    if stat.nrows() == 0 || adv.nrows() == 0 {
        return Err(Error::Degenerate("cannot fuse empty feature matrices".into()));
    }
    if stat.nrows() != adv.nrows() {
        return Err(Error::Dimension { expected: stat.nrows(), got: adv.nrows() });
    }
    if stat.labels != adv.labels || stat.participant_ids != adv.participant_ids {
        return Err(Error::InvalidArgument("row order or labels differ between feature matrices".into()));
    }
    let mut names = stat.column_names.clone();
    names.extend(adv.column_names.iter().cloned());
    FeatureMatrix::new(
        stat.values.hstack(&adv.values)?,
        names,
        stat.participant_ids.clone(),
        stat.labels.clone(),
        FeatureKind::Fused,
    )
}
