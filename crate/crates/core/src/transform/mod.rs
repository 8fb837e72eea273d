//! Time-frequency transforms applied to band-power series.

mod dct;
mod fft;
mod haar;
mod stft;
mod wvd;

pub use dct::dct2;
pub use fft::{fft, ifft, zero_pad_pow2, Spectrum};
pub use haar::{dwt_haar, idwt_haar, WaveletCoeffs};
pub use stft::{hann, stft, Spectrogram, STFT_HOP, STFT_WINDOW};
pub use wvd::{wvd, TfMatrix};
