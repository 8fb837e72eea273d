use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Complex spectrum of a power-of-two length signal. Bin `k` sits at
/// `k * sample_rate / N` Hz.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
    pub sample_rate: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate / self.bins.len() as f64
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|c| c.norm()).collect()
    }
}

/// Zero-pads to the next power of two (60 -> 64).
pub fn zero_pad_pow2(x: &[f64]) -> Vec<f64> {
    let n = x.len().max(1).next_power_of_two();
    let mut out = x.to_vec();
    out.resize(n, 0.0);
    out
}

/// Unnormalized forward radix-2 FFT of a real signal sampled at 1 Hz.
pub fn fft(x: &[f64]) -> Result<Spectrum> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false)?;
    Ok(Spectrum { bins: buf, sample_rate: 1.0 })
}

/// Inverse transform with 1/N scaling.
pub fn ifft(spec: &Spectrum) -> Result<Vec<Complex64>> {
    let mut buf = spec.bins.clone();
    fft_in_place(&mut buf, true)?;
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(buf)
}

/// Iterative decimation-in-time: bit-reversal permutation, then log2(N)
/// stages of butterflies `X[k] = E[k] + w^k O[k]`, `X[k+N/2] = E[k] - w^k O[k]`.
pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) -> Result<()> {
    let n = buf.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(invalid(format!("FFT length {n} is not a power of two >= 2")));
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = Complex64::from_polar(1.0, step * k as f64);
                let even = buf[start + k];
                let odd = w * buf[start + k + half];
                buf[start + k] = even + odd;
                buf[start + k + half] = even - odd;
            }
        }
        len *= 2;
    }
    Ok(())
}
