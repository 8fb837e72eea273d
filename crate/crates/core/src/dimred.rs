//! PCA with explained-variance reporting and Fisher LDA projections.
//!
//! Both rest on a cyclic Jacobi eigensolver for small dense symmetric
//! matrices (p <= a few hundred).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};

/// Eigen-decomposition of a symmetric matrix given as rows. Returns
/// eigenvalues in descending order and the matching unit eigenvectors.
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

/// Flips `v` so its largest-magnitude entry (first one on ties) is positive.
fn orient(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn column_means(x: &Matrix) -> Vec<f64> {
    let n = x.nrows() as f64;
    (0..x.ncols()).map(|j| x.column(j).iter().sum::<f64>() / n).collect()
}

fn project(x: &Matrix, mean: &[f64], dirs: &[Vec<f64>]) -> Matrix {
    let mut out = Matrix::zeros(x.nrows(), dirs.len());
    for (i, row) in x.rows_iter().enumerate() {
        for (k, d) in dirs.iter().enumerate() {
            out.set(i, k, row.iter().zip(mean).zip(d).map(|((a, m), w)| (a - m) * w).sum());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Orthonormal rows, one per retained component.
    pub components: Vec<Vec<f64>>,
    /// Sample-covariance eigenvalues, descending, clamped at 0.
    pub eigenvalues: Vec<f64>,
}

/// Eigen-decomposes the sample covariance of `x` (divisor n-1) and keeps
/// `min(n-1, p)` components.
pub fn pca_fit(x: &Matrix) -> Result<PcaModel> {
    let (n, p) = (x.nrows(), x.ncols());
    if n < 2 {
        return Err(Error::Degenerate("PCA needs at least two rows".into()));
    }
    let mean = column_means(x);
    let mut cov = vec![vec![0.0; p]; p];
    for row in x.rows_iter() {
        let d: Vec<f64> = row.iter().zip(&mean).map(|(a, m)| a - m).collect();
        for i in 0..p {
            for j in i..p {
                cov[i][j] += d[i] * d[j];
            }
        }
    }
    for i in 0..p {
        for j in i..p {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }
    let (values, mut vectors) = symmetric_eigen(&cov);
    let r = (n - 1).min(p);
    vectors.truncate(r);
    vectors.iter_mut().for_each(|v| orient(v));
    Ok(PcaModel { mean, components: vectors, eigenvalues: values.into_iter().take(r).map(|v| v.max(0.0)).collect() })
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Share of variance captured by the first `r` components. If every
    /// eigenvalue is zero the answer is 1.
    pub fn explained_variance(&self, r: usize) -> Result<f64> {
        if r > self.n_components() {
            return Err(Error::InvalidArgument(format!("{r} components requested, {} available", self.n_components())));
        }
        let total: f64 = self.eigenvalues.iter().sum();
        if total <= 0.0 {
            return Ok(1.0);
        }
        if r == self.n_components() {
            return Ok(1.0);
        }
        Ok(self.eigenvalues[..r].iter().sum::<f64>() / total)
    }

    /// Smallest component count whose explained variance reaches `fraction`.
    pub fn components_for(&self, fraction: f64) -> usize {
        (0..=self.n_components())
            .find(|&r| self.explained_variance(r).expect("in range") >= fraction)
            .unwrap_or(self.n_components())
    }

    pub fn transform(&self, x: &Matrix, r: usize) -> Result<Matrix> {
        if r > self.n_components() {
            return Err(Error::InvalidArgument(format!("{r} components requested, {} available", self.n_components())));
        }
        if x.ncols() != self.mean.len() {
            return Err(Error::Dimension { expected: self.mean.len(), got: x.ncols() });
        }
        Ok(project(x, &self.mean, &self.components[..r]))
    }

    /// Maps scores of the leading components back to feature space.
    pub fn inverse_transform(&self, scores: &Matrix) -> Result<Matrix> {
        let r = scores.ncols();
        if r > self.n_components() {
            return Err(Error::Dimension { expected: self.n_components(), got: r });
        }
        let p = self.mean.len();
        let mut out = Matrix::zeros(scores.nrows(), p);
        for (i, s) in scores.rows_iter().enumerate() {
            for j in 0..p {
                let v: f64 = (0..r).map(|k| s[k] * self.components[k][j]).sum();
                out.set(i, j, self.mean[j] + v);
            }
        }
        Ok(out)
    }
}

pub fn pca_transform(m: &PcaModel, x: &Matrix, r: usize) -> Result<Matrix> {
    m.transform(x, r)
}

pub fn explained_variance(m: &PcaModel, r: usize) -> Result<f64> {
    m.explained_variance(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub mean: Vec<f64>,
    /// `d × p`; projected data has unit pooled within-class variance.
    pub directions: Vec<Vec<f64>>,
    pub classes: Vec<AffectLabel>,
    /// Projected centroid of each class in `classes`.
    pub class_means: Vec<Vec<f64>>,
    pub ridge: f64,
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if !(d > 0.0) {
                    return Err(Error::Degenerate("within-class scatter is not positive definite".into()));
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solves `L y = b` for lower-triangular `L`.
fn forward_sub(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; b.len()];
    for i in 0..b.len() {
        y[i] = (b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    y
}

/// Solves `L^T x = y`.
fn backward_sub_t(l: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    x
}

/// Fisher LDA: maximizes between-class over within-class scatter.
///
/// The within-class scatter gets a ridge of `1e-6 · trace(Sw) / p`, so
/// collinear feature sets stay solvable. At most `classes - 1` directions
/// are kept (fewer if the between-class scatter is rank deficient).
pub fn lda_fit(x: &Matrix, labels: &[AffectLabel]) -> Result<LdaModel> {
    let (n, p) = (x.nrows(), x.ncols());
    if labels.len() != n {
        return Err(Error::Dimension { expected: n, got: labels.len() });
    }
    let mut groups: [Vec<usize>; N_CLASSES] = Default::default();
    for (i, l) in labels.iter().enumerate() {
        groups[l.code()].push(i);
    }
    let classes: Vec<AffectLabel> = AffectLabel::ALL.into_iter().filter(|c| !groups[c.code()].is_empty()).collect();
    if classes.len() < 2 {
        return Err(Error::Degenerate("LDA needs at least two classes".into()));
    }
    if let Some(c) = classes.iter().find(|c| groups[c.code()].len() < 2) {
        return Err(Error::Degenerate(format!("class {c} has fewer than two samples")));
    }

    let mean = column_means(x);
    let mut sw = vec![vec![0.0; p]; p];
    let mut sb = vec![vec![0.0; p]; p];
    for c in &classes {
        let idx = &groups[c.code()];
        let cm: Vec<f64> = (0..p).map(|j| idx.iter().map(|&i| x.get(i, j)).sum::<f64>() / idx.len() as f64).collect();
        for &i in idx {
            let d: Vec<f64> = x.row(i).iter().zip(&cm).map(|(a, m)| a - m).collect();
            for a in 0..p {
                for b in 0..p {
                    sw[a][b] += d[a] * d[b];
                }
            }
        }
        let d: Vec<f64> = cm.iter().zip(&mean).map(|(a, m)| a - m).collect();
        for a in 0..p {
            for b in 0..p {
                sb[a][b] += idx.len() as f64 * d[a] * d[b];
            }
        }
    }
    let trace: f64 = (0..p).map(|i| sw[i][i]).sum();
    let ridge = if trace > 0.0 { 1e-6 * trace / p as f64 } else { 1e-6 };
    (0..p).for_each(|i| sw[i][i] += ridge);

    let l = cholesky(&sw)?;
    // M = L^-1 Sb L^-T, built column by column.
    let linv_sb: Vec<Vec<f64>> = (0..p).map(|j| forward_sub(&l, &sb.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    // linv_sb[j] is column j of L^-1 Sb; row i of (L^-1 Sb) is then linv_sb[*][i].
    let mut m = vec![vec![0.0; p]; p];
    for i in 0..p {
        let row_i: Vec<f64> = (0..p).map(|j| linv_sb[j][i]).collect();
        let col = forward_sub(&l, &row_i);
        for j in 0..p {
            m[i][j] = col[j];
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            let s = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = s;
            m[j][i] = s;
        }
    }
    let (values, vectors) = symmetric_eigen(&m);
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let rank = values.iter().filter(|&&v| v > 1e-10 * top && v > 0.0).count();
    let d = (classes.len() - 1).min(rank);

    let pooled = ((n - classes.len()).max(1) as f64).sqrt();
    let mut directions: Vec<Vec<f64>> = vectors
        .iter()
        .take(d)
        .map(|u| backward_sub_t(&l, u).into_iter().map(|w| w * pooled).collect())
        .collect();

    // Orient each axis so the lowest-code class projects to the negative side.
    let first = &groups[classes[0].code()];
    for w in directions.iter_mut() {
        let c: f64 = first
            .iter()
            .map(|&i| x.row(i).iter().zip(&mean).zip(w.iter()).map(|((a, m), w)| (a - m) * w).sum::<f64>())
            .sum();
        if c > 0.0 {
            w.iter_mut().for_each(|v| *v = -*v);
        }
    }

    let proj = project(x, &mean, &directions);
    let class_means = classes
        .iter()
        .map(|c| {
            let idx = &groups[c.code()];
            (0..d).map(|k| idx.iter().map(|&i| proj.get(i, k)).sum::<f64>() / idx.len() as f64).collect()
        })
        .collect();
    Ok(LdaModel { mean, directions, classes, class_means, ridge })
}

impl LdaModel {
    pub fn n_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.ncols() != self.mean.len() {
            return Err(Error::Dimension { expected: self.mean.len(), got: x.ncols() });
        }
        Ok(project(x, &self.mean, &self.directions))
    }
}

pub fn lda_transform(m: &LdaModel, x: &Matrix) -> Result<Matrix> {
    m.transform(x)
}
