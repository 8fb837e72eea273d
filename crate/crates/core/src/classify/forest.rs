use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::grow_tree;
use super::{check_width, Classifier, DecisionTree, TreeParams};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};
use crate::synth::stream_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features tried per split; `None` means `floor(sqrt(p))`.
    pub mtry: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub master_seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, mtry: None, max_depth: None, min_samples_split: 2, master_seed: 42 }
    }
}

impl ForestParams {
    pub fn resolved_mtry(&self, p: usize) -> usize {
        self.mtry.unwrap_or_else(|| (p as f64).sqrt().floor() as usize).clamp(1, p.max(1))
    }
}

/// Bagged GINI trees combined by majority vote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub n_trees: usize,
    pub mtry: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub master_seed: u64,
    /// Per-tree seeds, derived from `(master_seed, tree index)`.
    pub tree_seeds: Vec<u64>,
    pub classes: Vec<AffectLabel>,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
}

/// Trains `n_trees` trees, each on its own bootstrap sample of size n drawn
/// from a stream keyed by `(master_seed, t)`. Trees are grown in parallel;
/// the model does not depend on scheduling.
pub fn fit_forest(x: &Matrix, labels: &[AffectLabel], params: &ForestParams) -> Result<ForestModel> {
    let n = x.nrows();
    if n == 0 || x.ncols() == 0 {
        return Err(Error::Degenerate("cannot fit a forest on empty input".into()));
    }
    if labels.len() != n {
        return Err(Error::Dimension { expected: n, got: labels.len() });
    }
    if params.n_trees == 0 {
        return Err(Error::InvalidArgument("n_trees must be >= 1".into()));
    }
    let mtry = params.resolved_mtry(x.ncols());
    let codes: Vec<usize> = labels.iter().map(|l| l.code()).collect();
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_samples_split: params.min_samples_split,
        mtry: Some(mtry),
        seed: 0,
    };
    let tree_seeds: Vec<u64> = (0..params.n_trees).map(|t| stream_seed(&[params.master_seed, t as u64])).collect();
    let trees = tree_seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bootstrap: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            grow_tree(x, &codes, bootstrap, &tree_params, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForestModel {
        n_trees: params.n_trees,
        mtry,
        max_depth: params.max_depth,
        min_samples_split: params.min_samples_split,
        master_seed: params.master_seed,
        tree_seeds,
        classes: AffectLabel::ALL.to_vec(),
        n_features: x.ncols(),
        trees,
    })
}

impl ForestModel {
    pub fn votes(&self, x: &[f64]) -> Result<[u32; N_CLASSES]> {
        check_width(self.n_features, x)?;
        let mut v = [0u32; N_CLASSES];
        for t in &self.trees {
            v[t.vote(x)] += 1;
        }
        Ok(v)
    }

    /// Normalized impurity-decrease importance summed over all trees.
    /// All zeros when no tree has a split.
    pub fn gini_importance(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.n_features];
        for t in &self.trees {
            t.accumulate_importance(&mut acc);
        }
        let total: f64 = acc.iter().sum();
        if total > 0.0 {
            acc.iter_mut().for_each(|v| *v /= total);
        }
        acc
    }
}

impl Classifier for ForestModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    /// Vote fractions.
    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        let v = self.votes(x)?;
        let n = self.trees.len() as f64;
        Ok(v.map(|c| c as f64 / n))
    }
}
