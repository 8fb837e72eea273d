use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{argmax_lowest, check_width, Classifier};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};

pub const VAR_SMOOTHING: f64 = 1e-9;

/// Gaussian naive Bayes. Only classes seen in training are scored; the others
/// get probability 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub classes: Vec<AffectLabel>,
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    /// Per-class population variances plus the smoothing term.
    pub variances: Vec<Vec<f64>>,
    pub epsilon: f64,
}

/// Fits per-class feature means and variances. Variances are smoothed by
/// `1e-9 × (largest column variance)`.
pub fn fit_nb(x: &Matrix, labels: &[AffectLabel]) -> Result<NbModel> {
    let n = x.nrows();
    if n == 0 {
        return Err(Error::Degenerate("no training samples".into()));
    }
    if labels.len() != n {
        return Err(Error::Dimension { expected: n, got: labels.len() });
    }
    let p = x.ncols();
    let col_var = |rows: &[usize], j: usize| -> (f64, f64) {
        let m = rows.iter().map(|&i| x.get(i, j)).sum::<f64>() / rows.len() as f64;
        let v = rows.iter().map(|&i| (x.get(i, j) - m).powi(2)).sum::<f64>() / rows.len() as f64;
        (m, v)
    };
    let all: Vec<usize> = (0..n).collect();
    let max_var = (0..p).map(|j| col_var(&all, j).1).fold(0.0, f64::max);
    let epsilon = VAR_SMOOTHING * max_var;

    let mut model = NbModel { classes: Vec::new(), priors: Vec::new(), means: Vec::new(), variances: Vec::new(), epsilon };
    for class in AffectLabel::ALL {
        let rows: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
        if rows.is_empty() {
            continue;
        }
        let (m, v): (Vec<f64>, Vec<f64>) = (0..p).map(|j| col_var(&rows, j)).unzip();
        model.classes.push(class);
        model.priors.push(rows.len() as f64 / n as f64);
        model.means.push(m);
        model.variances.push(v.into_iter().map(|v| v + epsilon).collect());
    }
    if model.variances.iter().flatten().any(|&v| !(v > 0.0)) {
        return Err(Error::Degenerate("a feature has zero variance in every class".into()));
    }
    Ok(model)
}

impl NbModel {
    /// Unnormalized log posterior `ln P(c) + sum_j ln N(x_j; mu, var)` per fitted class.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_width(self.n_features(), x)?;
        Ok((0..self.classes.len())
            .map(|c| {
                let ll: f64 = x
                    .iter()
                    .zip(&self.means[c])
                    .zip(&self.variances[c])
                    .map(|((&xi, &m), &v)| -0.5 * (2.0 * PI * v).ln() - (xi - m).powi(2) / (2.0 * v))
                    .sum();
                self.priors[c].ln() + ll
            })
            .collect())
    }
}

impl Classifier for NbModel {
    fn n_features(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        let jll = self.joint_log_likelihood(x)?;
        let top = jll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = jll.iter().map(|v| (v - top).exp()).collect();
        let z: f64 = w.iter().sum();
        let mut p = [0.0; N_CLASSES];
        for (c, wi) in self.classes.iter().zip(w) {
            p[c.code()] = wi / z;
        }
        Ok(p)
    }

    /// Argmax of the log posterior itself, so exact ties go to the lowest code.
    fn predict(&self, x: &[f64]) -> Result<AffectLabel> {
        let jll = self.joint_log_likelihood(x)?;
        Ok(self.classes[argmax_lowest(&jll)])
    }
}
