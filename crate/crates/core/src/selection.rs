//! Greedy mRMR feature selection and forest impurity importance.
//!
//! Relevance is the one-way ANOVA F statistic of a column against the class
//! labels; redundancy is the mean absolute Pearson correlation with the
//! columns already chosen.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::classify::{fit_forest, ForestModel, ForestParams};
use crate::error::{Error, Result};
use crate::model::{AffectLabel, FeatureMatrix, N_CLASSES};

/// Returned by [`anova_f`] when classes are perfectly separated (zero
/// within-group variance, nonzero between-group variance).
pub const F_SENTINEL: f64 = 1e12;
pub const MIQ_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "MID")]
    Mid,
    #[serde(rename = "MIQ")]
    Miq,
    #[serde(rename = "GINI_IMPORTANCE")]
    GiniImportance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Column indices in pick order.
    pub chosen: Vec<usize>,
    /// Objective value of each pick.
    pub scores: Vec<f64>,
    pub criterion: Criterion,
}

/// One-way ANOVA F of `col` grouped by label.
pub fn anova_f(col: &[f64], labels: &[AffectLabel]) -> Result<f64> {
    if col.len() != labels.len() {
        return Err(Error::Dimension { expected: col.len(), got: labels.len() });
    }
    let n = col.len();
    let mut sums = [0.0; N_CLASSES];
    let mut counts = [0usize; N_CLASSES];
    for (&v, l) in col.iter().zip(labels) {
        sums[l.code()] += v;
        counts[l.code()] += 1;
    }
    let k = counts.iter().filter(|&&c| c > 0).count();
    if k < 2 {
        return Err(Error::Degenerate("ANOVA F needs at least two classes".into()));
    }
    if n < k + 1 {
        return Err(Error::Degenerate(format!("ANOVA F needs more than {k} samples")));
    }
    if col.iter().all(|&v| v == col[0]) {
        return Ok(0.0);
    }
    let grand = col.iter().sum::<f64>() / n as f64;
    let means: [f64; N_CLASSES] = std::array::from_fn(|c| if counts[c] > 0 { sums[c] / counts[c] as f64 } else { 0.0 });
    let ssb: f64 = (0..N_CLASSES).map(|c| counts[c] as f64 * (means[c] - grand).powi(2)).sum();
    let ssw: f64 = col.iter().zip(labels).map(|(&v, l)| (v - means[l.code()]).powi(2)).sum();
    let sst: f64 = col.iter().map(|v| (v - grand).powi(2)).sum();
    if ssw <= 1e-14 * sst {
        return Ok(if ssb > 0.0 { F_SENTINEL } else { 0.0 });
    }
    Ok((ssb / (k - 1) as f64) / (ssw / (n - k) as f64))
}

/// Pearson correlation; 0 when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Greedy forward mRMR.
///
/// The first pick maximizes F. Each later pick maximizes `F_j - R_j` (MID) or
/// `F_j / (R_j + 1e-12)` (MIQ), where `R_j` is the mean `|r|` between column
/// `j` and the chosen columns. Ties go to the lowest column index.
pub fn mrmr(fm: &FeatureMatrix, k: usize, criterion: Criterion) -> Result<SelectionResult> {
    let p = fm.ncols();
    if k == 0 || k > p {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={p}")));
    }
    if criterion == Criterion::GiniImportance {
        return Err(Error::InvalidArgument("mrmr supports MID or MIQ".into()));
    }
    let cols: Vec<Vec<f64>> = (0..p).map(|j| fm.values.column(j)).collect();
    let relevance: Vec<f64> = cols.iter().map(|c| anova_f(c, &fm.labels)).collect::<Result<_>>()?;

    let mut chosen = Vec::with_capacity(k);
    let mut scores = Vec::with_capacity(k);
    let mut taken = vec![false; p];
    // Running sum of |r| against the chosen set, per candidate.
    let mut redundancy = vec![0.0; p];
    for step in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..p).filter(|&j| !taken[j]) {
            let score = if step == 0 {
                relevance[j]
            } else {
                let r = redundancy[j] / step as f64;
                match criterion {
                    Criterion::Mid => relevance[j] - r,
                    _ => relevance[j] / (r + MIQ_EPS),
                }
            };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        let (j, s) = best.expect("k <= p leaves a candidate");
        taken[j] = true;
        chosen.push(j);
        scores.push(s);
        for c in (0..p).filter(|&c| !taken[c]) {
            redundancy[c] += pearson(&cols[c], &cols[j]).abs();
        }
    }
    Ok(SelectionResult { chosen, scores, criterion })
}

/// Impurity importance of a trained forest over `p` features.
pub fn gini_importance(model: &ForestModel, p: usize) -> Result<Vec<f64>> {
    if model.trees.is_empty() {
        return Err(Error::Degenerate("forest has no trees".into()));
    }
    if model.n_features != p {
        return Err(Error::Dimension { expected: model.n_features, got: p });
    }
    Ok(model.gini_importance())
}

/// Top-`k` columns by forest importance (ties to the lower index).
pub fn select_by_importance(fm: &FeatureMatrix, k: usize, params: &ForestParams) -> Result<SelectionResult> {
    let p = fm.ncols();
    if k == 0 || k > p {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={p}")));
    }
    let forest = fit_forest(&fm.values, &fm.labels, params)?;
    let imp = gini_importance(&forest, p)?;
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| imp[b].total_cmp(&imp[a]).then(a.cmp(&b)));
    order.truncate(k);
    let scores = order.iter().map(|&j| imp[j]).collect();
    Ok(SelectionResult { chosen: order, scores, criterion: Criterion::GiniImportance })
}

/// `rank,index,name,score`, one row per pick.
pub fn write_selection_report<W: Write>(sel: &SelectionResult, names: &[String], mut out: W) -> Result<()> {
    writeln!(out, "rank,index,name,score")?;
    for (rank, (&j, s)) in sel.chosen.iter().zip(&sel.scores).enumerate() {
        writeln!(out, "{},{},{},{}", rank + 1, j, names[j], s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use AffectLabel::*;

    #[test]
    fn anova_cases() {
        let labels = [Happy, Happy, Sad, Sad, Disgust, Disgust, Peaceful, Peaceful];
        assert_eq!(anova_f(&[3.0; 8], &labels).unwrap(), 0.0);
        let codes: Vec<f64> = labels.iter().map(|l| l.code() as f64).collect();
        assert_eq!(anova_f(&codes, &labels).unwrap(), F_SENTINEL);
        assert!(anova_f(&[1.0, 2.0, 3.0], &[Sad, Sad, Sad]).is_err());
    }

    #[test]
    fn pearson_cases() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x) - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &neg) + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[2.0; 4]), 0.0);
    }
}
