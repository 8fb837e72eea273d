//! PCA variance profile and LDA class separation on fused features.

use eeg_affect::dimred::{lda_fit, pca_fit};
use eeg_affect::ingest::MinMaxScaler;
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::synth::{generate_dataset, SynthConfig};
use eeg_affect::AffectLabel;

fn main() -> eeg_affect::Result<()> {
    let ds = generate_dataset(&SynthConfig::default())?;
    let fm = featurize(&ds, FeatureSet::Fused, Some(3.0))?;
    let x = MinMaxScaler::fit(&fm.values)?.apply(&fm.values)?;

    let pca = pca_fit(&x)?;
    for r in [1, 2, 5, 10, 20, 40, 80, 120] {
        println!("{r:>4} components: {:.4}", pca.explained_variance(r)?);
    }
    println!("98% of the variance needs {} components", pca.components_for(0.98));

    let lda = lda_fit(&x, &fm.labels)?;
    let z = lda.transform(&x)?;
    println!("\nLDA: {} directions; class means on the first two:", lda.n_directions());
    for label in AffectLabel::ALL {
        let rows: Vec<usize> = (0..z.nrows()).filter(|&i| fm.labels[i] == label).collect();
        let m = |j: usize| rows.iter().map(|&i| z.get(i, j)).sum::<f64>() / rows.len() as f64;
        println!("  {:<9} {:>7.3} {:>7.3}", label.name(), m(0), m(1));
    }
    Ok(())
}
