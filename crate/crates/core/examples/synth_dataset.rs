//! Generates a synthetic band-power dataset and prints per-class band means.

use eeg_affect::model::validate_dataset;
use eeg_affect::synth::{class_signature, generate_dataset, SynthConfig};
use eeg_affect::{AffectLabel, Band};

fn main() -> eeg_affect::Result<()> {
    let cfg = SynthConfig { participants: 20, ..SynthConfig::default() };
    let ds = generate_dataset(&cfg)?;
    assert!(validate_dataset(&ds).is_empty());
    println!("{} recordings x {} frames", ds.recordings.len(), ds.recordings[0].frames.len());

    print!("{:<10}", "");
    for b in Band::ALL {
        print!("{:>11}", b.name());
    }
    println!();
    for label in AffectLabel::ALL {
        let recs: Vec<_> = ds.recordings.iter().filter(|r| r.label == label).collect();
        print!("{:<10}", label.name());
        for b in Band::ALL {
            let total: f64 = recs.iter().flat_map(|r| r.band_series(b)).sum();
            print!("{:>11.0}", total / (recs.len() * 60) as f64);
        }
        println!();
    }

    let sig = class_signature(AffectLabel::Happy, cfg.separability);
    println!("happy mean band powers: {sig:.0?}");
    Ok(())
}
