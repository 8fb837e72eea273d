//! One-vs-rest ROC curves from forest vote fractions, written as SVG.

use eeg_affect::classify::{ForestParams, ModelSpec};
use eeg_affect::evaluate::{holdout_evaluate, holdout_split, Normalization};
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::plot::roc_svg;
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig::default())?;
    let fm = featurize(&ds, FeatureSet::Fused, Some(3.0))?;
    let (train, test) = holdout_split(&fm.labels, 0.7, 42, true)?;
    let out = holdout_evaluate(&ModelSpec::Forest(ForestParams::default()), &fm, &train, &test, Normalization::TrainFit)?;

    for c in &out.report.roc {
        println!("{:<9} AUC {:.4} ({} points)", c.label.name(), c.auc, c.points.len());
    }
    let path = std::env::temp_dir().join("eeg_affect_roc.svg");
    std::fs::write(&path, roc_svg(&out.report)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
