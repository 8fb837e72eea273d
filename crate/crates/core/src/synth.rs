//! Deterministic synthetic band-power recordings.
//!
//! Each recording is an AR(1) process in log space around a class-dependent
//! band-power signature, exponentiated to give positive, right-skewed values.
//! Randomness for a recording comes from a stream keyed by
//! `(seed, participant_id, label)`, so parallel generation is reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::{AffectLabel, RawDataset, RawRecording, FRAMES, N_BANDS};

/// Neutral band powers (device units), delta .. gammaMid.
pub const BASE_POWER: [f64; N_BANDS] = [60000.0, 25000.0, 9000.0, 7000.0, 5000.0, 4000.0, 2500.0, 1500.0];

/// Log-scale mean offsets per unit of separability, rows in label-code order.
///
/// | class    | signature                                         |
/// |----------|---------------------------------------------------|
/// | happy    | high beta and gamma up, alpha down (alert/agitated) |
/// | sad      | delta/theta up, beta down                         |
/// | disgust  | delta, betaLow and gamma up, alpha down           |
/// | peaceful | both alpha bands strongly up, beta/gamma down (relaxed) |
pub const CLASS_OFFSETS: [[f64; N_BANDS]; 4] = [
    [0.00, -0.03, -0.04, -0.06, 0.05, 0.10, 0.06, 0.04],
    [0.05, 0.06, 0.00, 0.02, -0.04, -0.06, -0.03, -0.02],
    [0.06, -0.02, -0.05, -0.03, 0.06, 0.02, 0.08, 0.07],
    [-0.04, 0.03, 0.10, 0.08, -0.03, -0.05, -0.05, -0.04],
];

/// Per-class shift of the AR coefficient per unit of separability; gives the
/// classes different temporal smoothness as well as different levels.
pub const CLASS_AR_SHIFT: [f64; 4] = [-0.04, 0.05, -0.02, 0.06];

const MAX_AR: f64 = 0.95;

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub participants: u32,
    pub seed: u64,
    /// Scales the class-mean offsets; 0 makes every class identical.
    pub separability: f64,
    /// Lag-one autocorrelation of the log-power process, in `[0, 1)`.
    pub ar_coeff: f64,
    /// Standard deviation of the log-power process.
    pub noise_scale: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { participants: 100, seed: 42, separability: 2.0, ar_coeff: 0.6, noise_scale: 0.3 }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.participants == 0 {
            return Err(invalid("participants must be positive"));
        }
        if !(self.separability >= 0.0 && self.separability.is_finite()) {
            return Err(invalid("separability must be a finite value >= 0"));
        }
        if !(0.0..1.0).contains(&self.ar_coeff) {
            return Err(invalid("ar_coeff must lie in [0, 1)"));
        }
        if !(self.noise_scale > 0.0 && self.noise_scale.is_finite()) {
            return Err(invalid("noise_scale must be a finite value > 0"));
        }
        Ok(())
    }
}

/// Mean band powers of `label` at the given separability.
pub fn class_signature(label: AffectLabel, separability: f64) -> [f64; N_BANDS] {
    let off = &CLASS_OFFSETS[label.code()];
    std::array::from_fn(|b| BASE_POWER[b] * (separability * off[b]).exp())
}

fn class_ar(label: AffectLabel, cfg: &SynthConfig) -> f64 {
    (cfg.ar_coeff + cfg.separability * CLASS_AR_SHIFT[label.code()]).clamp(0.0, MAX_AR)
}

/// SplitMix64 finalizer, used to derive independent per-recording seeds.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn stream_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5EED_u64, |acc, &p| mix64(acc ^ mix64(p)))
}

fn generate_recording(cfg: &SynthConfig, participant_id: u32, label: AffectLabel) -> RawRecording {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(&[cfg.seed, participant_id as u64, label.code() as u64]));
    let means = class_signature(label, cfg.separability);
    let a = class_ar(label, cfg);
    let innov = (1.0 - a * a).sqrt();
    let sigma = cfg.noise_scale;
    // Lognormal bias correction keeps E[value] at the signature mean.
    let bias = -0.5 * sigma * sigma;

    let mut state: [f64; N_BANDS] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
    let mut frames = Vec::with_capacity(FRAMES);
    for t in 0..FRAMES {
        if t > 0 {
            for z in state.iter_mut() {
                let e: f64 = StandardNormal.sample(&mut rng);
                *z = a * *z + innov * e;
            }
        }
        frames.push(std::array::from_fn(|b| means[b] * (sigma * state[b] + bias).exp()));
    }
    RawRecording { participant_id, label, frames }
}

/// `participants × 4` recordings ordered by participant, then label code.
pub fn generate_dataset(cfg: &SynthConfig) -> Result<RawDataset> {
    cfg.validate()?;
    let keys: Vec<(u32, AffectLabel)> = (1..=cfg.participants)
        .flat_map(|p| AffectLabel::ALL.into_iter().map(move |l| (p, l)))
        .collect();
    let recordings = keys.par_iter().map(|&(p, l)| generate_recording(cfg, p, l)).collect();
    Ok(RawDataset { recordings })
}
