//! Holdout and k-fold splitting, confusion-matrix metrics, one-vs-rest ROC
//! and cross-validated evaluation.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{argmax_lowest, Classifier, ModelSpec, TrainedModel};
use crate::error::{Error, Result};
use crate::ingest::MinMaxScaler;
use crate::matrix::Matrix;
use crate::model::{AffectLabel, FeatureMatrix, N_CLASSES};
use crate::synth::stream_seed;

const SPLIT_STREAM: u64 = 0x5911;
const FOLD_STREAM: u64 = 0xF01D;

fn shuffled(mut idx: Vec<usize>, seed: u64, tag: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(&[seed, tag]));
    idx.shuffle(&mut rng);
    idx
}

fn class_groups(labels: &[AffectLabel]) -> [Vec<usize>; N_CLASSES] {
    let mut g: [Vec<usize>; N_CLASSES] = Default::default();
    for (i, l) in labels.iter().enumerate() {
        g[l.code()].push(i);
    }
    g
}

/// Seeded train/test split with `round(ratio·n)` training rows. The
/// stratified variant allocates `floor(ratio·size)` per class and hands the
/// remaining rows out by largest fractional remainder (ties to the lowest
/// class code). Index lists are returned sorted.
pub fn holdout_split(labels: &[AffectLabel], ratio: f64, seed: u64, stratified: bool) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = labels.len();
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("split ratio {ratio} must lie in (0, 1)")));
    }
    if n < 2 {
        return Err(Error::Degenerate("need at least two samples to split".into()));
    }
    let total = (ratio * n as f64).round() as usize;
    let (mut train, mut test) = (Vec::new(), Vec::new());
    if stratified {
        let groups = class_groups(labels);
        let mut quota = [0usize; N_CLASSES];
        let mut frac = Vec::new();
        for c in 0..N_CLASSES {
            let exact = ratio * groups[c].len() as f64;
            quota[c] = exact.floor() as usize;
            if !groups[c].is_empty() {
                frac.push((c, exact - exact.floor()));
            }
        }
        frac.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut remaining = total.saturating_sub(quota.iter().sum());
        for (c, _) in frac {
            if remaining == 0 {
                break;
            }
            if quota[c] < groups[c].len() {
                quota[c] += 1;
                remaining -= 1;
            }
        }
        for c in 0..N_CLASSES {
            let g = &groups[c];
            if g.is_empty() {
                continue;
            }
            if quota[c] == 0 || quota[c] == g.len() {
                let label = AffectLabel::from_code(c).expect("code");
                return Err(Error::Degenerate(format!("class {label} would have an empty train or test side")));
            }
            let s = shuffled(g.clone(), seed, SPLIT_STREAM + c as u64);
            train.extend_from_slice(&s[..quota[c]]);
            test.extend_from_slice(&s[quota[c]..]);
        }
    } else {
        if total == 0 || total == n {
            return Err(Error::Degenerate("split leaves an empty side".into()));
        }
        let s = shuffled((0..n).collect(), seed, SPLIT_STREAM);
        train.extend_from_slice(&s[..total]);
        test.extend_from_slice(&s[total..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// `k` seeded folds whose sizes differ by at most one.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 2..={n}")));
    }
    let s = shuffled((0..n).collect(), seed, FOLD_STREAM);
    let mut folds = vec![Vec::new(); k];
    for (pos, i) in s.into_iter().enumerate() {
        folds[pos % k].push(i);
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Stratified folds: each class is shuffled and dealt round-robin, the deal
/// continuing across classes so fold sizes also differ by at most one.
pub fn stratified_kfold(labels: &[AffectLabel], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let groups = class_groups(labels);
    let min_class = groups.iter().filter(|g| !g.is_empty()).map(Vec::len).min().unwrap_or(0);
    if k < 2 || k > min_class {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 2..={min_class} (smallest class)")));
    }
    let mut folds = vec![Vec::new(); k];
    let mut pos = 0;
    for (c, g) in groups.iter().enumerate() {
        for i in shuffled(g.clone(), seed, FOLD_STREAM + 1 + c as u64) {
            folds[pos % k].push(i);
            pos += 1;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// `counts[true][predicted]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion(pub [[u64; N_CLASSES]; N_CLASSES]);

impl Confusion {
    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..N_CLASSES).map(|c| self.0[c][c]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        self.trace() as f64 / self.total() as f64
    }

    fn class_counts(&self, c: usize) -> (u64, u64, u64) {
        let tp = self.0[c][c];
        let fp = (0..N_CLASSES).map(|t| self.0[t][c]).sum::<u64>() - tp;
        let fn_ = self.0[c].iter().sum::<u64>() - tp;
        (tp, fp, fn_)
    }
}

pub fn confusion_matrix(truth: &[AffectLabel], pred: &[AffectLabel]) -> Result<Confusion> {
    if truth.len() != pred.len() {
        return Err(Error::Dimension { expected: truth.len(), got: pred.len() });
    }
    let mut m = Confusion::default();
    for (t, p) in truth.iter().zip(pred) {
        m.0[t.code()][p.code()] += 1;
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Macro,
    Micro,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Some precision or recall had a zero denominator and was set to 0.
    pub zero_division: bool,
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

/// `2TP / (2TP + FP + FN)`, the harmonic mean of precision and recall in count form.
fn f1_counts(tp: u64, fp: u64, fn_: u64) -> f64 {
    ratio(2 * tp, 2 * tp + fp + fn_).0
}

/// Precision, recall and F1 under the chosen averaging. Zero denominators
/// give 0 and set `zero_division`.
pub fn prf(m: &Confusion, averaging: Averaging) -> Prf {
    match averaging {
        Averaging::Micro => {
            let (mut tp, mut fp, mut fn_) = (0, 0, 0);
            for c in 0..N_CLASSES {
                let (a, b, d) = m.class_counts(c);
                tp += a;
                fp += b;
                fn_ += d;
            }
            let (precision, zp) = ratio(tp, tp + fp);
            let (recall, zr) = ratio(tp, tp + fn_);
            Prf { precision, recall, f1: f1_counts(tp, fp, fn_), zero_division: zp || zr }
        }
        Averaging::Macro | Averaging::Weighted => {
            let total = m.total() as f64;
            let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
            let mut zero = false;
            for c in 0..N_CLASSES {
                let (tp, fp, fn_) = m.class_counts(c);
                let support = (tp + fn_) as f64;
                let w = match averaging {
                    Averaging::Macro => 1.0 / N_CLASSES as f64,
                    _ => support / total,
                };
                let (pc, zp) = ratio(tp, tp + fp);
                let (rc, zr) = ratio(tp, tp + fn_);
                zero |= zp || zr;
                p += w * pc;
                r += w * rc;
                f += w * f1_counts(tp, fp, fn_);
            }
            Prf { precision: p, recall: r, f1: f, zero_division: zero }
        }
    }
}

/// One-vs-rest ROC points `(fpr, tpr)` from `(0,0)` to `(1,1)`. Samples with
/// equal scores are admitted together as one threshold step.
pub fn roc_curve(scores: &[f64], positives: &[bool]) -> Result<Vec<(f64, f64)>> {
    if scores.len() != positives.len() {
        return Err(Error::Dimension { expected: scores.len(), got: positives.len() });
    }
    let p = positives.iter().filter(|&&b| b).count();
    let n = positives.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::Degenerate("ROC needs at least one positive and one negative".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = 0;
    while k < order.len() {
        let s = scores[order[k]];
        while k < order.len() && scores[order[k]] == s {
            if positives[order[k]] {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        points.push((fp as f64 / n as f64, tp as f64 / p as f64));
    }
    Ok(points)
}

/// Trapezoidal area under a ROC polyline.
pub fn auc(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * 0.5).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRoc {
    pub label: AffectLabel,
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub confusion: Confusion,
    pub accuracy: f64,
    pub macro_avg: Prf,
    pub micro_avg: Prf,
    pub weighted_avg: Prf,
    pub roc: Vec<ClassRoc>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    /// Builds a report from true labels, predictions and per-class scores.
    pub fn from_predictions(truth: &[AffectLabel], pred: &[AffectLabel], scores: &[[f64; N_CLASSES]]) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::Degenerate("cannot evaluate zero samples".into()));
        }
        if scores.len() != truth.len() {
            return Err(Error::Dimension { expected: truth.len(), got: scores.len() });
        }
        let confusion = confusion_matrix(truth, pred)?;
        let (macro_avg, micro_avg, weighted_avg) =
            (prf(&confusion, Averaging::Macro), prf(&confusion, Averaging::Micro), prf(&confusion, Averaging::Weighted));
        let mut warnings = Vec::new();
        if macro_avg.zero_division || micro_avg.zero_division {
            warnings.push("zero-denominator precision or recall reported as 0".to_string());
        }
        let mut roc = Vec::new();
        for label in AffectLabel::ALL {
            let pos: Vec<bool> = truth.iter().map(|&t| t == label).collect();
            let s: Vec<f64> = scores.iter().map(|p| p[label.code()]).collect();
            match roc_curve(&s, &pos) {
                Ok(points) => roc.push(ClassRoc { label, auc: auc(&points), points }),
                Err(_) => warnings.push(format!("no ROC for {label}: class absent or universal in the test set")),
            }
        }
        Ok(Self { n: truth.len(), accuracy: confusion.accuracy(), confusion, macro_avg, micro_avg, weighted_avg, roc, warnings })
    }
}

/// How the min-max scaler is fitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Fit on training rows, apply to held-out rows.
    #[default]
    TrainFit,
    /// Fit once on every row.
    Global,
    None,
}

fn scale_split(x: &Matrix, train: &[usize], test: &[usize], norm: Normalization) -> Result<(Matrix, Matrix, Option<MinMaxScaler>)> {
    let (xtr, xte) = (x.select_rows(train), x.select_rows(test));
    let scaler = match norm {
        Normalization::TrainFit => Some(MinMaxScaler::fit(&xtr)?),
        Normalization::Global => Some(MinMaxScaler::fit(x)?),
        Normalization::None => None,
    };
    match &scaler {
        Some(s) => Ok((s.apply(&xtr)?, s.apply(&xte)?, scaler)),
        None => Ok((xtr, xte, None)),
    }
}

/// A trained model with its scaler plus train/test metrics.
#[derive(Clone, Debug)]
pub struct HoldoutOutcome {
    pub model: TrainedModel,
    pub scaler: Option<MinMaxScaler>,
    pub train_accuracy: f64,
    pub report: EvalReport,
}

fn fit_and_score(spec: &ModelSpec, fm: &FeatureMatrix, train: &[usize], test: &[usize], norm: Normalization) -> Result<(HoldoutOutcome, Vec<AffectLabel>, Vec<[f64; N_CLASSES]>)> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::Degenerate("empty train or test split".into()));
    }
    let (xtr, xte, scaler) = scale_split(&fm.values, train, test, norm)?;
    let ytr: Vec<AffectLabel> = train.iter().map(|&i| fm.labels[i]).collect();
    let yte: Vec<AffectLabel> = test.iter().map(|&i| fm.labels[i]).collect();
    let model = spec.fit(&xtr, &ytr)?;
    let train_pred = model.predict_matrix(&xtr)?;
    let train_accuracy = confusion_matrix(&ytr, &train_pred)?.accuracy();
    let scores = model.predict_proba_matrix(&xte)?;
    let pred = model.predict_matrix(&xte)?;
    let report = EvalReport::from_predictions(&yte, &pred, &scores)?;
    Ok((HoldoutOutcome { model, scaler, train_accuracy, report }, pred, scores))
}

/// Trains on `train` and evaluates on `test`.
pub fn holdout_evaluate(spec: &ModelSpec, fm: &FeatureMatrix, train: &[usize], test: &[usize], norm: Normalization) -> Result<HoldoutOutcome> {
    Ok(fit_and_score(spec, fm, train, test, norm)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    /// Metrics over the pooled out-of-fold predictions.
    pub pooled: EvalReport,
    pub folds: Vec<EvalReport>,
    /// Mean training accuracy across folds.
    pub train_accuracy: f64,
}

/// Trains on k-1 folds and predicts the held-out fold, for every fold; the
/// scaler is refitted inside each training fold under `TrainFit`.
pub fn cross_validate(spec: &ModelSpec, fm: &FeatureMatrix, folds: &[Vec<usize>], norm: Normalization) -> Result<CvReport> {
    let n = fm.nrows();
    let mut seen = vec![false; n];
    for &i in folds.iter().flatten() {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument("folds must partition the rows".into()));
        }
    }
    if seen.iter().any(|s| !s) || folds.len() < 2 {
        return Err(Error::InvalidArgument("folds must partition the rows".into()));
    }
    let per_fold = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train: Vec<usize> =
                folds.iter().enumerate().filter(|&(g, _)| g != f).flat_map(|(_, v)| v.iter().copied()).collect();
            fit_and_score(spec, fm, &train, test, norm)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut truth = Vec::with_capacity(n);
    let mut pred = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    let mut reports = Vec::with_capacity(folds.len());
    let mut train_acc = 0.0;
    for (test, (outcome, p, s)) in folds.iter().zip(per_fold) {
        truth.extend(test.iter().map(|&i| fm.labels[i]));
        pred.extend(p);
        scores.extend(s);
        train_acc += outcome.train_accuracy;
        reports.push(outcome.report);
    }
    let pooled = EvalReport::from_predictions(&truth, &pred, &scores)?;
    Ok(CvReport { pooled, folds: reports, train_accuracy: train_acc / folds.len() as f64 })
}

/// Saved evaluation: what was run, plus the test report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationDocument {
    pub model: String,
    pub protocol: String,
    pub n_features: usize,
    pub train_accuracy: f64,
    pub report: EvalReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub folds: Vec<EvalReport>,
}

impl EvaluationDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Aligned text table in the layout of the accuracy and P/R/F1 tables.
    pub fn to_table(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "{:<28} {:>24} {:>23}", "MLA Name", "MLA Train Accuracy (%)", "MLA Test Accuracy (%)");
        let _ = writeln!(s, "{:<28} {:>24.2} {:>23.2}", self.model, 100.0 * self.train_accuracy, 100.0 * r.accuracy);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<10} {:>10} {:>10} {:>10}", "Average", "Precision", "Recall", "F1-score");
        for (name, p) in [("Macro", r.macro_avg), ("Micro", r.micro_avg), ("Weighted", r.weighted_avg)] {
            let _ = writeln!(s, "{:<10} {:>10.4} {:>10.4} {:>10.4}", name, 100.0 * p.precision, 100.0 * p.recall, 100.0 * p.f1);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "confusion (rows = true, cols = predicted): happy sad disgust peaceful");
        for (label, row) in AffectLabel::ALL.iter().zip(r.confusion.0.iter()) {
            let _ = writeln!(s, "{:<10} {:>6} {:>6} {:>6} {:>6}", label.name(), row[0], row[1], row[2], row[3]);
        }
        for c in &r.roc {
            let _ = writeln!(s, "AUC {:<10} {:.4}", c.label.name(), c.auc);
        }
        for w in &r.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// Predicted label for every row of a score matrix (ties to the lowest code).
pub fn argmax_labels(scores: &[[f64; N_CLASSES]]) -> Vec<AffectLabel> {
    scores.iter().map(|s| AffectLabel::from_code(argmax_lowest(s)).expect("code")).collect()
}
