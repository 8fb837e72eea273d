use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_lowest, check_width, Classifier};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};
use crate::synth::stream_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronParams {
    pub epochs: usize,
    pub lr: f64,
    pub master_seed: u64,
}

impl Default for PerceptronParams {
    fn default() -> Self {
        Self { epochs: 10_000, lr: 1.0, master_seed: 42 }
    }
}

/// One-vs-rest perceptrons, one per label code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronModel {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    /// Epochs each binary perceptron ran before converging or hitting the cap.
    pub epochs_trained: Vec<usize>,
}

/// Classic mistake-driven updates `w += lr·y·x`, `b += lr·y` with `y = ±1`.
/// Each binary problem visits the samples in a fresh seeded order every epoch
/// and stops after the first mistake-free epoch.
pub fn fit_perceptron(x: &Matrix, labels: &[AffectLabel], params: &PerceptronParams) -> Result<PerceptronModel> {
    let n = x.nrows();
    if n == 0 {
        return Err(Error::Degenerate("no training samples".into()));
    }
    if labels.len() != n {
        return Err(Error::Dimension { expected: n, got: labels.len() });
    }
    let p = x.ncols();
    let mut model = PerceptronModel { weights: Vec::new(), biases: Vec::new(), epochs_trained: Vec::new() };
    for class in AffectLabel::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(&[params.master_seed, class.code() as u64]));
        let target: Vec<f64> = labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
        let (mut w, mut b) = (vec![0.0; p], 0.0);
        let mut order: Vec<usize> = (0..n).collect();
        let mut epochs = 0;
        while epochs < params.epochs {
            epochs += 1;
            order.shuffle(&mut rng);
            let mut mistakes = 0;
            for &i in &order {
                let row = x.row(i);
                let act = b + row.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>();
                if target[i] * act <= 0.0 {
                    mistakes += 1;
                    let step = params.lr * target[i];
                    w.iter_mut().zip(row).for_each(|(wj, xj)| *wj += step * xj);
                    b += step;
                }
            }
            if mistakes == 0 {
                break;
            }
        }
        model.weights.push(w);
        model.biases.push(b);
        model.epochs_trained.push(epochs);
    }
    Ok(model)
}

impl PerceptronModel {
    pub fn activations(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        check_width(self.n_features(), x)?;
        Ok(std::array::from_fn(|c| self.biases[c] + x.iter().zip(&self.weights[c]).map(|(a, w)| a * w).sum::<f64>()))
    }
}

impl Classifier for PerceptronModel {
    fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Softmax of the activations.
    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        let a = self.activations(x)?;
        let top = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e = a.map(|v| (v - top).exp());
        let z: f64 = e.iter().sum();
        Ok(e.map(|v| v / z))
    }

    fn predict(&self, x: &[f64]) -> Result<AffectLabel> {
        Ok(AffectLabel::from_code(argmax_lowest(&self.activations(x)?)).expect("4 classes"))
    }
}
