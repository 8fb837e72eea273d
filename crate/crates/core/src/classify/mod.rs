//! GINI decision trees, bagged random forests, Gaussian naive Bayes and a
//! one-vs-rest perceptron, plus model persistence.
//!
//! Class scores are always 4-vectors indexed by label code, and every
//! argmax tie resolves to the lowest code.

mod forest;
mod nb;
mod perceptron;
mod persist;
mod tree;

pub use forest::{fit_forest, ForestModel, ForestParams};
pub use nb::{fit_nb, NbModel};
pub use perceptron::{fit_perceptron, PerceptronModel, PerceptronParams};
pub use persist::{ModelDocument, MODEL_FORMAT, MODEL_VERSION};
pub use tree::{fit_tree, DecisionTree, TreeModel, TreeNode, TreeParams};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};

pub type ClassCounts = [u32; N_CLASSES];

/// `sum_i P(i) (1 - P(i))` with `P(i) = counts[i] / total`.
pub fn gini_impurity(counts: &ClassCounts) -> Result<f64> {
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("GINI impurity of an empty node".into()));
    }
    let n = total as f64;
    Ok(counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * (1.0 - p)
        })
        .sum())
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax_lowest<T: PartialOrd + Copy>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

pub trait Classifier {
    fn n_features(&self) -> usize;

    /// Per-class scores summing to 1, indexed by label code.
    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]>;

    fn predict(&self, x: &[f64]) -> Result<AffectLabel> {
        let p = self.predict_proba(x)?;
        Ok(AffectLabel::from_code(argmax_lowest(&p)).expect("4 classes"))
    }

    fn predict_matrix(&self, x: &Matrix) -> Result<Vec<AffectLabel>> {
        x.rows_iter().map(|r| self.predict(r)).collect()
    }

    fn predict_proba_matrix(&self, x: &Matrix) -> Result<Vec<[f64; N_CLASSES]>> {
        x.rows_iter().map(|r| self.predict_proba(r)).collect()
    }
}

pub(crate) fn check_width(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::Dimension { expected, got: x.len() });
    }
    Ok(())
}

/// Which learner to train, with its hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Forest(ForestParams),
    Tree(TreeParams),
    Nb,
    Perceptron(PerceptronParams),
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Forest(_) => "Random Forest Classifier",
            ModelSpec::Tree(_) => "Decision Tree Classifier",
            ModelSpec::Nb => "Gaussian NB",
            ModelSpec::Perceptron(_) => "Perceptron",
        }
    }

    pub fn fit(&self, x: &Matrix, labels: &[AffectLabel]) -> Result<TrainedModel> {
        Ok(match self {
            ModelSpec::Forest(p) => TrainedModel::Forest(fit_forest(x, labels, p)?),
            ModelSpec::Tree(p) => TrainedModel::Tree(TreeModel::fit(x, labels, p)?),
            ModelSpec::Nb => TrainedModel::Nb(fit_nb(x, labels)?),
            ModelSpec::Perceptron(p) => TrainedModel::Perceptron(fit_perceptron(x, labels, p)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Forest(ForestModel),
    Tree(TreeModel),
    Nb(NbModel),
    Perceptron(PerceptronModel),
}

impl TrainedModel {
    fn inner(&self) -> &dyn Classifier {
        match self {
            TrainedModel::Forest(m) => m,
            TrainedModel::Tree(m) => m,
            TrainedModel::Nb(m) => m,
            TrainedModel::Perceptron(m) => m,
        }
    }
}

impl Classifier for TrainedModel {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }

    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        self.inner().predict_proba(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_cases() {
        assert_eq!(gini_impurity(&[10, 0, 0, 0]).unwrap(), 0.0);
        assert_eq!(gini_impurity(&[5, 5, 5, 5]).unwrap(), 0.75);
        assert_eq!(gini_impurity(&[3, 1, 0, 0]).unwrap(), 0.375);
        assert!(gini_impurity(&[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn argmax_ties_lowest() {
        assert_eq!(argmax_lowest(&[0.25, 0.25, 0.25, 0.25]), 0);
        assert_eq!(argmax_lowest(&[0.1, 0.4, 0.4, 0.1]), 1);
    }
}
