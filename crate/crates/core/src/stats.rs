//! Seven per-band descriptors of a recording window, laid out as the
//! 56-column statistical feature matrix.
//!
//! All moments use the population (1/n) convention.

use rayon::prelude::*;

use crate::matrix::Matrix;
use crate::model::{Band, FeatureKind, FeatureMatrix, RawDataset};

pub const ENTROPY_BINS: usize = 16;

/// Column order of the statistics within each band block.
pub const STAT_NAMES: [&str; 7] = ["mean", "median", "std", "rms", "skewness", "kurtosis", "entropy"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowStats {
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub rms: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub entropy: f64,
}

impl WindowStats {
    pub fn compute(x: &[f64]) -> Self {
        Self {
            mean: mean(x),
            median: median(x),
            std: std(x),
            rms: rms(x),
            skewness: skewness(x),
            kurtosis: kurtosis(x),
            entropy: entropy(x),
        }
    }

    pub fn to_array(self) -> [f64; 7] {
        [self.mean, self.median, self.std, self.rms, self.skewness, self.kurtosis, self.entropy]
    }
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// k-th central moment.
fn central_moment(x: &[f64], k: i32) -> f64 {
    let mu = mean(x);
    x.iter().map(|&v| (v - mu).powi(k)).sum::<f64>() / x.len() as f64
}

pub fn std(x: &[f64]) -> f64 {
    central_moment(x, 2).sqrt()
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Third standardized moment; 0 for constant input.
pub fn skewness(x: &[f64]) -> f64 {
    let m2 = central_moment(x, 2);
    if m2 <= 0.0 {
        return 0.0;
    }
    central_moment(x, 3) / m2.powf(1.5)
}

/// `E(s^4) - 3 E(s^2)^2` on the centered signal `s = x - mean(x)`.
///
/// This is deliberately not divided by `sigma^4`, so it carries the units of
/// the signal to the fourth power.
pub fn kurtosis(x: &[f64]) -> f64 {
    let m2 = central_moment(x, 2);
    central_moment(x, 4) - 3.0 * m2 * m2
}

/// Shannon entropy (bits) of a 16-bin equal-width histogram over the data's
/// own range. Constant input gives 0.
pub fn entropy(x: &[f64]) -> f64 {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    if !(width > 0.0) {
        return 0.0;
    }
    let mut counts = [0usize; ENTROPY_BINS];
    for &v in x {
        let b = (((v - lo) / width) * ENTROPY_BINS as f64) as usize;
        counts[b.min(ENTROPY_BINS - 1)] += 1;
    }
    shannon_bits(counts.iter().map(|&c| c as f64))
}

/// Entropy in bits of a non-negative weight vector after normalizing it to sum 1.
pub(crate) fn shannon_bits(weights: impl Iterator<Item = f64> + Clone) -> f64 {
    let total: f64 = weights.clone().sum();
    if !(total > 0.0) {
        return 0.0;
    }
    -weights
        .filter(|&w| w > 0.0)
        .map(|w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>()
}

pub fn stat_column_names() -> Vec<String> {
    Band::ALL
        .iter()
        .flat_map(|b| STAT_NAMES.iter().map(move |s| format!("stat:{b}:{s}")))
        .collect()
}

/// One row per recording: 8 bands × 7 statistics, band-major.
pub fn extract_stat_features(ds: &RawDataset) -> FeatureMatrix {
    let rows: Vec<Vec<f64>> = ds
        .recordings
        .par_iter()
        .map(|r| {
            Band::ALL
                .iter()
                .flat_map(|&b| WindowStats::compute(&r.band_series(b)).to_array())
                .collect()
        })
        .collect();
    let values = if rows.is_empty() { Matrix::zeros(0, 56) } else { Matrix::from_rows(&rows).expect("uniform rows") };
    FeatureMatrix::new(
        values,
        stat_column_names(),
        ds.recordings.iter().map(|r| r.participant_id).collect(),
        ds.recordings.iter().map(|r| r.label).collect(),
        FeatureKind::Statistical,
    )
    .expect("statistics are finite on valid input")
}
