use num_complex::Complex64;

use super::fft::fft_in_place;
use crate::error::{invalid, Result};

/// Time × frequency Wigner-Ville matrix, `values[n][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TfMatrix {
    pub values: Vec<Vec<f64>>,
}

impl TfMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Discrete pseudo Wigner-Ville distribution.
///
/// For each time `n` the instantaneous autocorrelation `x[n+m] x[n-m]` is
/// formed over the lags where both samples exist (|m| <= min(n, N-1-n, N/2-1)),
/// then transformed over the lag axis. Because the kernel is symmetric in `m`
/// the result is real, and `sum_k W[n,k] = N |x[n]|^2` exactly.
pub fn wvd(x: &[f64]) -> Result<TfMatrix> {
    let n = x.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(invalid(format!("WVD length {n} is not a power of two >= 2")));
    }
    let mut values = Vec::with_capacity(n);
    let mut kernel = vec![Complex64::new(0.0, 0.0); n];
    for t in 0..n {
        kernel.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        let max_lag = t.min(n - 1 - t).min(n / 2 - 1);
        for m in 0..=max_lag {
            let prod = x[t + m] * x[t - m];
            kernel[m] = Complex64::new(prod, 0.0);
            if m > 0 {
                kernel[n - m] = Complex64::new(prod, 0.0);
            }
        }
        fft_in_place(&mut kernel, false)?;
        values.push(kernel.iter().map(|c| c.re).collect());
    }
    Ok(TfMatrix { values })
}
