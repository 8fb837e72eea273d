//! Statistical and advanced feature blocks, fused column-wise.

use eeg_affect::advanced::{extract_advanced_features, fuse};
use eeg_affect::ingest::{clip_recordings, write_feature_csv, DEFAULT_CLIP_Z};
use eeg_affect::stats::extract_stat_features;
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig { participants: 10, ..SynthConfig::default() })?;
    let ds = clip_recordings(&ds, DEFAULT_CLIP_Z)?;
    let stat = extract_stat_features(&ds);
    let adv = extract_advanced_features(&ds)?;
    let fused = fuse(&stat, &adv)?;
    println!("stat {}x{}, advanced {}x{}, fused {}x{}", stat.nrows(), stat.ncols(), adv.nrows(), adv.ncols(), fused.nrows(), fused.ncols());

    let mut out = Vec::new();
    write_feature_csv(&fused.select_rows(&[0, 1]), &mut out)?;
    let text = String::from_utf8_lossy(&out);
    for line in text.lines() {
        println!("{}...", &line[..line.len().min(100)]);
    }
    Ok(())
}
