//! Reference implementations shared by the oracle and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use eeg_affect::classify::{gini_impurity, DecisionTree, TreeNode};
use eeg_affect::model::FeatureKind;
use eeg_affect::{AffectLabel, FeatureMatrix, Matrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| r.random_range(lo..hi)).collect()
}

/// Direct O(N^2) DFT.
pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * t % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// Direct-definition statistics, computed via raw-moment expansions and
/// explicit bin edges rather than the library's centered passes.
pub mod stat_oracle {
    pub fn mean(x: &[f64]) -> f64 {
        let mut s = 0.0;
        for v in x {
            s += v;
        }
        s / x.len() as f64
    }
    fn raw(x: &[f64], k: i32) -> f64 {
        x.iter().map(|v| v.powi(k)).sum::<f64>() / x.len() as f64
    }
    pub fn median(x: &[f64]) -> f64 {
        let mut pool = x.to_vec();
        let mut ordered = Vec::new();
        while !pool.is_empty() {
            let i = (0..pool.len()).fold(0, |b, i| if pool[i] < pool[b] { i } else { b });
            ordered.push(pool.swap_remove(i));
        }
        let n = ordered.len();
        if n % 2 == 1 { ordered[n / 2] } else { (ordered[n / 2 - 1] + ordered[n / 2]) / 2.0 }
    }
    pub fn var(x: &[f64]) -> f64 {
        let m = mean(x);
        raw(x, 2) - m * m
    }
    pub fn std(x: &[f64]) -> f64 {
        var(x).max(0.0).sqrt()
    }
    pub fn rms(x: &[f64]) -> f64 {
        raw(x, 2).sqrt()
    }
    pub fn m3(x: &[f64]) -> f64 {
        let m = mean(x);
        raw(x, 3) - 3.0 * m * raw(x, 2) + 2.0 * m.powi(3)
    }
    pub fn m4(x: &[f64]) -> f64 {
        let m = mean(x);
        raw(x, 4) - 4.0 * m * raw(x, 3) + 6.0 * m * m * raw(x, 2) - 3.0 * m.powi(4)
    }
    pub fn skewness(x: &[f64]) -> f64 {
        let v = var(x);
        if v <= 0.0 { 0.0 } else { m3(x) / v.powf(1.5) }
    }
    pub fn kurtosis(x: &[f64]) -> f64 {
        m4(x) - 3.0 * var(x).powi(2)
    }
    pub fn entropy(x: &[f64]) -> f64 {
        let lo = x.iter().copied().fold(f64::MAX, f64::min);
        let hi = x.iter().copied().fold(f64::MIN, f64::max);
        if hi <= lo {
            return 0.0;
        }
        let width = (hi - lo) / 16.0;
        let mut h = 0.0;
        for b in 0..16 {
            let (a, z) = (lo + b as f64 * width, lo + (b + 1) as f64 * width);
            let c = x.iter().filter(|&&v| v >= a && (v < z || b == 15)).count();
            if c > 0 {
                let p = c as f64 / x.len() as f64;
                h -= p * p.log2();
            }
        }
        h
    }
}

pub fn labels_of(codes: &[usize]) -> Vec<AffectLabel> {
    codes.iter().map(|&c| AffectLabel::from_code(c).unwrap()).collect()
}

/// Greedy mRMR evaluated from scratch at every step.
pub fn brute_mrmr(cols: &[Vec<f64>], codes: &[usize], k: usize, quotient: bool) -> Vec<usize> {
    fn f_stat(x: &[f64], y: &[usize]) -> f64 {
        let n = x.len() as f64;
        let grand = x.iter().sum::<f64>() / n;
        let (mut ssb, mut ssw, mut groups) = (0.0, 0.0, 0.0);
        for g in 0..4 {
            let v: Vec<f64> = x.iter().zip(y).filter(|(_, &c)| c == g).map(|(a, _)| *a).collect();
            if v.is_empty() {
                continue;
            }
            groups += 1.0;
            let m = v.iter().sum::<f64>() / v.len() as f64;
            ssb += v.len() as f64 * (m - grand).powi(2);
            ssw += v.iter().map(|a| (a - m).powi(2)).sum::<f64>();
        }
        (ssb / (groups - 1.0)) / (ssw / (n - groups))
    }
    fn corr(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < k {
        let mut best = None;
        let mut best_score = f64::NEG_INFINITY;
        for j in 0..cols.len() {
            if chosen.contains(&j) {
                continue;
            }
            let rel = f_stat(&cols[j], codes);
            let score = if chosen.is_empty() {
                rel
            } else {
                let red = chosen.iter().map(|&c| corr(&cols[j], &cols[c]).abs()).sum::<f64>() / chosen.len() as f64;
                if quotient { rel / (red + 1e-12) } else { rel - red }
            };
            if score > best_score {
                best_score = score;
                best = Some(j);
            }
        }
        chosen.push(best.unwrap());
    }
    chosen
}

pub fn random_instance(seed: u64, n: usize, p: usize) -> (FeatureMatrix, Vec<Vec<f64>>, Vec<usize>) {
    let mut r = rng(seed);
    let codes: Vec<usize> = (0..n).map(|i| i % 4).collect();
    let mut cols: Vec<Vec<f64>> = (0..p)
        .map(|j| codes.iter().map(|&c| (j % 3) as f64 * 0.3 * c as f64 + r.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    if seed % 3 == 0 {
        // exact duplicate of the strongest-signal column: forces tie-breaks
        cols[p - 1] = cols[2].clone();
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let fm = FeatureMatrix::new(
        Matrix::from_rows(&rows).unwrap(),
        (0..p).map(|j| format!("f{j}")).collect(),
        (1..=n as u32).collect(),
        labels_of(&codes),
        FeatureKind::Derived,
    )
    .unwrap();
    (fm, cols, codes)
}

/// Walks every split and checks the weighted child impurity is below the parent's.
pub fn assert_strict_decrease(t: &DecisionTree) {
    for node in &t.nodes {
        if let TreeNode::Split { counts, left, right, .. } = node {
            let g = |c: &[u32; 4]| {
                let n: u32 = c.iter().sum();
                (n as f64, gini_impurity(c).unwrap())
            };
            let (n, gp) = g(counts);
            let (nl, gl) = g(t.nodes[*left].counts());
            let (nr, gr) = g(t.nodes[*right].counts());
            assert!(nl > 0.0 && nr > 0.0);
            assert!((nl * gl + nr * gr) / n < gp, "split does not decrease impurity");
        }
    }
}
