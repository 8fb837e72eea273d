//! Stratified 10-fold cross-validation of the default forest.

use eeg_affect::classify::{ForestParams, ModelSpec};
use eeg_affect::evaluate::{cross_validate, stratified_kfold, EvaluationDocument, Normalization};
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig::default())?;
    let fm = featurize(&ds, FeatureSet::Fused, Some(3.0))?;
    let folds = stratified_kfold(&fm.labels, 10, 42)?;
    let spec = ModelSpec::Forest(ForestParams::default());
    let cv = cross_validate(&spec, &fm, &folds, Normalization::TrainFit)?;

    for (k, f) in cv.folds.iter().enumerate() {
        println!("fold {k:>2}: {:.3}", f.accuracy);
    }
    let doc = EvaluationDocument {
        model: spec.name().into(),
        protocol: "stratified k-fold, k = 10".into(),
        n_features: fm.ncols(),
        train_accuracy: cv.train_accuracy,
        report: cv.pooled,
        folds: Vec::new(),
    };
    print!("\n{}", doc.to_table());
    Ok(())
}
