use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{invalid, Result};

/// Multi-level Haar decomposition. `details[0]` is the finest level.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletCoeffs {
    pub approx: Vec<f64>,
    pub details: Vec<Vec<f64>>,
}

impl WaveletCoeffs {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn detail_energy(&self) -> f64 {
        self.details.iter().flatten().map(|v| v * v).sum()
    }

    pub fn approx_energy(&self) -> f64 {
        self.approx.iter().map(|v| v * v).sum()
    }
}

/// Orthonormal Haar analysis filter bank: at each level the approximation is
/// convolved with the low-pass `[1, 1]/sqrt(2)` and high-pass `[1, -1]/sqrt(2)`
/// filters and downsampled by two.
pub fn dwt_haar(x: &[f64], levels: usize) -> Result<WaveletCoeffs> {
    if levels == 0 || levels >= usize::BITS as usize || x.is_empty() || x.len() % (1usize << levels) != 0 {
        return Err(invalid(format!("{levels} Haar levels do not fit a length-{} signal", x.len())));
    }
    let mut approx = x.to_vec();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (a, d): (Vec<f64>, Vec<f64>) = approx
            .chunks_exact(2)
            .map(|p| ((p[0] + p[1]) * FRAC_1_SQRT_2, (p[0] - p[1]) * FRAC_1_SQRT_2))
            .unzip();
        details.push(d);
        approx = a;
    }
    Ok(WaveletCoeffs { approx, details })
}

/// Synthesis bank; exact inverse of [`dwt_haar`].
pub fn idwt_haar(c: &WaveletCoeffs) -> Result<Vec<f64>> {
    let mut x = c.approx.clone();
    for d in c.details.iter().rev() {
        if d.len() != x.len() {
            return Err(invalid("detail length does not match approximation length"));
        }
        x = x
            .iter()
            .zip(d)
            .flat_map(|(&a, &d)| [(a + d) * FRAC_1_SQRT_2, (a - d) * FRAC_1_SQRT_2])
            .collect();
    }
    Ok(x)
}
