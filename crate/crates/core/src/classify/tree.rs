use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_lowest, check_width, gini_impurity, ClassCounts, Classifier};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{AffectLabel, N_CLASSES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until nodes are pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features examined per split; `None` examines all.
    pub mtry: Option<usize>,
    /// Seeds the feature sampling when `mtry < p`.
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: None, min_samples_split: 2, mtry: None, seed: 0 }
    }
}

/// Arena node. Children are indices into [`DecisionTree::nodes`]; samples with
/// `x[feature] <= threshold` go left. Every node keeps the class counts of the
/// training samples that reached it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf { counts: ClassCounts },
    Split { feature: usize, threshold: f64, counts: ClassCounts, left: usize, right: usize },
}

impl TreeNode {
    pub fn counts(&self) -> &ClassCounts {
        match self {
            TreeNode::Leaf { counts } | TreeNode::Split { counts, .. } => counts,
        }
    }
}

/// Binary tree stored as an arena; `nodes[0]` is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn leaf_for(&self, x: &[f64]) -> &ClassCounts {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { counts } => return counts,
                TreeNode::Split { feature, threshold, left, right, .. } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Majority class of the leaf reached by `x` (ties to the lowest code).
    pub fn vote(&self, x: &[f64]) -> usize {
        argmax_lowest(self.leaf_for(x))
    }

    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, i: usize) -> usize {
            match &t.nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(t, *left).max(go(t, *right)),
            }
        }
        go(self, 0)
    }

    /// Adds `(n_node / n_root) * impurity decrease` of every split to `acc[feature]`.
    pub fn accumulate_importance(&self, acc: &mut [f64]) {
        let root_n: u32 = self.nodes[0].counts().iter().sum();
        for node in &self.nodes {
            if let TreeNode::Split { feature, counts, left, right, .. } = node {
                let n: u32 = counts.iter().sum();
                let l = self.nodes[*left].counts();
                let r = self.nodes[*right].counts();
                let (nl, nr) = (l.iter().sum::<u32>() as f64, r.iter().sum::<u32>() as f64);
                let g = gini_impurity(counts).expect("nonempty");
                let child = (nl * gini_impurity(l).expect("nonempty") + nr * gini_impurity(r).expect("nonempty"))
                    / n as f64;
                acc[*feature] += (n as f64 / root_n as f64) * (g - child);
            }
        }
    }
}

/// `sum_c counts[c]^2`, the integer core of every GINI comparison.
fn sum_sq(c: &ClassCounts) -> u128 {
    c.iter().map(|&v| (v as u128) * (v as u128)).sum()
}

/// Candidate split quality `sum(l^2)/nl + sum(r^2)/nr` kept as an exact
/// fraction. Larger means lower weighted GINI impurity.
#[derive(Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn new(left: &ClassCounts, nl: u32, right: &ClassCounts, nr: u32) -> Self {
        let (nl, nr) = (nl as u128, nr as u128);
        Score { num: sum_sq(left) * nr + sum_sq(right) * nl, den: nl * nr }
    }

    fn beats(self, other: Score) -> bool {
        self.num * other.den > other.num * self.den
    }
}

fn class_counts(labels: &[usize], idx: &[usize]) -> ClassCounts {
    let mut c = [0u32; N_CLASSES];
    for &i in idx {
        c[labels[i]] += 1;
    }
    c
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [usize],
    params: &'a TreeParams,
    mtry: usize,
    rng: ChaCha8Rng,
    nodes: Vec<TreeNode>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: Score,
}

impl Grower<'_> {
    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let counts = class_counts(self.y, &idx);
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { counts });

        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
        if pure || !depth_ok || idx.len() < self.params.min_samples_split.max(2) {
            return id;
        }
        let Some(best) = self.best_split(&idx, &counts) else {
            return id;
        };
        let (li, ri): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.x.get(i, best.feature) <= best.threshold);
        debug_assert!(!li.is_empty() && !ri.is_empty());
        let left = self.grow(li, depth + 1);
        let right = self.grow(ri, depth + 1);
        self.nodes[id] = TreeNode::Split { feature: best.feature, threshold: best.threshold, counts, left, right };
        id
    }

    fn best_split(&mut self, idx: &[usize], counts: &ClassCounts) -> Option<BestSplit> {
        let p = self.x.ncols();
        let mut features: Vec<usize> = if self.mtry >= p {
            (0..p).collect()
        } else {
            sample(&mut self.rng, p, self.mtry).into_vec()
        };
        features.sort_unstable();

        let n = idx.len() as u32;
        // A split must strictly beat the parent: sum(c^2)/n.
        let parent = Score { num: sum_sq(counts), den: n as u128 };
        let mut best: Option<BestSplit> = None;
        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(idx.len());
        for f in features {
            pairs.clear();
            pairs.extend(idx.iter().map(|&i| (self.x.get(i, f), self.y[i])));
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = [0u32; N_CLASSES];
            for k in 0..pairs.len() - 1 {
                left[pairs[k].1] += 1;
                let (lo, hi) = (pairs[k].0, pairs[k + 1].0);
                if lo == hi {
                    continue;
                }
                let nl = k as u32 + 1;
                let right: ClassCounts = std::array::from_fn(|c| counts[c] - left[c]);
                let score = Score::new(&left, nl, &right, n - nl);
                if !score.beats(parent) {
                    continue;
                }
                if best.as_ref().is_none_or(|b| score.beats(b.score)) {
                    let mid = 0.5 * (lo + hi);
                    let threshold = if mid < hi { mid } else { lo };
                    best = Some(BestSplit { feature: f, threshold, score });
                }
            }
        }
        if let Some(b) = &best {
            assert!(b.score.beats(parent), "split must strictly decrease weighted GINI impurity");
        }
        best
    }
}

/// Grows one tree on the rows `idx` of `x` (duplicates allowed, as produced
/// by bootstrapping). `labels` holds label codes.
pub(crate) fn grow_tree(
    x: &Matrix,
    labels: &[usize],
    idx: Vec<usize>,
    params: &TreeParams,
    rng: ChaCha8Rng,
) -> Result<DecisionTree> {
    if idx.is_empty() || x.ncols() == 0 {
        return Err(Error::Degenerate("cannot grow a tree on empty input".into()));
    }
    let mtry = params.mtry.unwrap_or(x.ncols()).clamp(1, x.ncols());
    let mut g = Grower { x, y: labels, params, mtry, rng, nodes: Vec::new() };
    g.grow(idx, 0);
    Ok(DecisionTree { nodes: g.nodes })
}

/// Fits a single tree on every row of `x`.
pub fn fit_tree(x: &Matrix, labels: &[AffectLabel], params: &TreeParams) -> Result<DecisionTree> {
    if labels.len() != x.nrows() {
        return Err(Error::Dimension { expected: x.nrows(), got: labels.len() });
    }
    let codes: Vec<usize> = labels.iter().map(|l| l.code()).collect();
    grow_tree(x, &codes, (0..x.nrows()).collect(), params, ChaCha8Rng::seed_from_u64(params.seed))
}

/// A single decision tree used as a standalone classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub params: TreeParams,
    pub n_features: usize,
    pub tree: DecisionTree,
}

impl TreeModel {
    pub fn fit(x: &Matrix, labels: &[AffectLabel], params: &TreeParams) -> Result<Self> {
        Ok(Self { params: params.clone(), n_features: x.ncols(), tree: fit_tree(x, labels, params)? })
    }
}

impl Classifier for TreeModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_proba(&self, x: &[f64]) -> Result<[f64; N_CLASSES]> {
        check_width(self.n_features, x)?;
        let mut p = [0.0; N_CLASSES];
        p[self.tree.vote(x)] = 1.0;
        Ok(p)
    }
}
