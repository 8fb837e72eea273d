//! The seven window statistics, on a hand-made series and on a dataset.

use eeg_affect::stats::{extract_stat_features, WindowStats, STAT_NAMES};
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let x: Vec<f64> = (0..60).map(|t| 100.0 + 20.0 * (t as f64 / 5.0).sin() + if t == 30 { 80.0 } else { 0.0 }).collect();
    let s = WindowStats::compute(&x);
    for (name, v) in STAT_NAMES.iter().zip(s.to_array()) {
        println!("{name:>9}: {v:.4}");
    }

    let ds = generate_dataset(&SynthConfig { participants: 5, ..SynthConfig::default() })?;
    let fm = extract_stat_features(&ds);
    println!("\n{} x {} statistical matrix", fm.nrows(), fm.ncols());
    println!("first columns: {:?}", &fm.column_names[..4]);
    Ok(())
}
