use std::f64::consts::PI;

/// Orthonormal DCT-II:
/// `c[k] = s(k) * sum_n x[n] cos(pi (n + 1/2) k / N)`, `s(0) = sqrt(1/N)`,
/// `s(k) = sqrt(2/N)` otherwise.
pub fn dct2(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    // cos(pi * m / (2N)) for m in 0..4N covers every (2n+1)k product mod 4N.
    let table: Vec<f64> = (0..4 * n).map(|m| (PI * m as f64 / (2.0 * nf)).cos()).collect();
    (0..n)
        .map(|k| {
            let s = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
            let acc: f64 = x.iter().enumerate().map(|(i, &v)| v * table[((2 * i + 1) * k) % (4 * n)]).sum();
            s * acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_compacts_to_dc() {
        let c = dct2(&[2.0; 9]);
        assert!((c[0] - 2.0 * 3.0).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-12));
    }
}
