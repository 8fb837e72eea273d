use std::f64::consts::PI;

use super::fft::fft_in_place;
use num_complex::Complex64;

pub const STFT_WINDOW: usize = 16;
pub const STFT_HOP: usize = 8;

/// Magnitude spectrogram, `frames[t][f]` with `f` in `0..=window_len/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrogram {
    pub frames: Vec<Vec<f64>>,
    pub window_len: usize,
    pub hop: usize,
}

impl Spectrogram {
    pub fn n_bins(&self) -> usize {
        self.window_len / 2 + 1
    }

    /// Per-bin magnitude averaged over frames.
    pub fn time_average(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.n_bins()];
        for f in &self.frames {
            acc.iter_mut().zip(f).for_each(|(a, v)| *a += v);
        }
        let t = self.frames.len().max(1) as f64;
        acc.iter_mut().for_each(|a| *a /= t);
        acc
    }
}

/// Periodic Hann window.
pub fn hann(len: usize) -> Vec<f64> {
    (0..len).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / len as f64).cos()).collect()
}

/// Hann-windowed short-time transform, window 16, hop 8. A 60-sample input
/// yields 6 frames of 9 one-sided bins. Inputs shorter than one window are
/// zero-padded into a single frame.
pub fn stft(x: &[f64]) -> Spectrogram {
    let win = hann(STFT_WINDOW);
    let n_frames = if x.len() >= STFT_WINDOW { 1 + (x.len() - STFT_WINDOW) / STFT_HOP } else { 1 };
    let frames = (0..n_frames)
        .map(|t| {
            let start = t * STFT_HOP;
            let mut buf: Vec<Complex64> = (0..STFT_WINDOW)
                .map(|i| Complex64::new(x.get(start + i).copied().unwrap_or(0.0) * win[i], 0.0))
                .collect();
            fft_in_place(&mut buf, false).expect("window length is a power of two");
            buf[..=STFT_WINDOW / 2].iter().map(|c| c.norm()).collect()
        })
        .collect();
    Spectrogram { frames, window_len: STFT_WINDOW, hop: STFT_HOP }
}
