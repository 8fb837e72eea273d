//! mRMR (difference and quotient forms) against forest GINI importance.

use eeg_affect::classify::ForestParams;
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::selection::{mrmr, select_by_importance, Criterion};
use eeg_affect::synth::{generate_dataset, SynthConfig};

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig { participants: 40, ..SynthConfig::default() })?;
    let fm = featurize(&ds, FeatureSet::Fused, Some(3.0))?;

    for crit in [Criterion::Mid, Criterion::Miq] {
        let sel = mrmr(&fm, 8, crit)?;
        println!("{crit:?}:");
        for (i, s) in sel.chosen.iter().zip(&sel.scores) {
            println!("  {:<28} {s:>12.4}", fm.column_names[*i]);
        }
    }
    let gini = select_by_importance(&fm, 8, &ForestParams { n_trees: 60, ..ForestParams::default() })?;
    println!("GINI importance:");
    for (i, s) in gini.chosen.iter().zip(&gini.scores) {
        println!("  {:<28} {s:>12.4}", fm.column_names[*i]);
    }
    Ok(())
}
