//! FFT, STFT, Haar DWT, DCT-II and pseudo Wigner-Ville on a two-tone signal.

use std::f64::consts::PI;

use eeg_affect::advanced::advanced_summaries;
use eeg_affect::transform::{dct2, dwt_haar, fft, idwt_haar, stft, wvd, zero_pad_pow2};

fn main() -> eeg_affect::Result<()> {
    let x: Vec<f64> = (0..60)
        .map(|n| {
            let t = n as f64;
            (2.0 * PI * 4.0 * t / 64.0).sin() + if n >= 30 { 0.5 * (2.0 * PI * 12.0 * t / 64.0).sin() } else { 0.0 }
        })
        .collect();
    let padded = zero_pad_pow2(&x);

    let mags = fft(&padded)?.magnitudes();
    let peak = (1..=32).max_by(|&a, &b| mags[a].total_cmp(&mags[b])).unwrap();
    println!("fft: {} bins, strongest one-sided bin {peak}", mags.len());

    let spec = stft(&x);
    for (i, frame) in spec.frames.iter().enumerate() {
        let bars: String = frame.iter().map(|m| if *m > 2.0 { '#' } else if *m > 0.7 { '+' } else { '.' }).collect();
        println!("stft frame {i}: {bars}");
    }

    let c = dwt_haar(&padded, 3)?;
    let back = idwt_haar(&c)?;
    let err = back.iter().zip(&padded).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("haar: approx {:.3}, detail {:.3}, reconstruction error {err:.1e}", c.approx_energy(), c.detail_energy());

    let d = dct2(&x);
    let total: f64 = d.iter().map(|v| v * v).sum();
    println!("dct: first 8 coefficients hold {:.1}% of the energy", 100.0 * d[..8].iter().map(|v| v * v).sum::<f64>() / total);

    let tf = wvd(&padded)?;
    println!("wvd: {}x{} time-frequency grid", tf.values.len(), tf.values[0].len());

    println!("\nsummaries: {:.4?}", advanced_summaries(&x)?.to_array());
    Ok(())
}
