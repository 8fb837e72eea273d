//! Holdout comparison of the four classifiers on stat/advanced/fused features.

use eeg_affect::classify::{ForestParams, ModelSpec, PerceptronParams, TreeParams};
use eeg_affect::evaluate::{holdout_evaluate, holdout_split, Normalization};
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig::default())?;
    let models = [
        ModelSpec::Forest(ForestParams::default()),
        ModelSpec::Tree(TreeParams::default()),
        ModelSpec::Nb,
        ModelSpec::Perceptron(PerceptronParams { epochs: 2000, ..PerceptronParams::default() }),
    ];
    for set in [FeatureSet::Stat, FeatureSet::Advanced, FeatureSet::Fused] {
        let fm = featurize(&ds, set, Some(3.0))?;
        let (train, test) = holdout_split(&fm.labels, 0.7, 42, true)?;
        println!("{set:?} features ({} columns)", fm.ncols());
        println!("  {:<28}{:>12}{:>12}", "MLA Name", "Train (%)", "Test (%)");
        for spec in &models {
            let out = holdout_evaluate(spec, &fm, &train, &test, Normalization::TrainFit)?;
            println!("  {:<28}{:>12.2}{:>12.2}", spec.name(), 100.0 * out.train_accuracy, 100.0 * out.report.accuracy);
        }
    }
    Ok(())
}
