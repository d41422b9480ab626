use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{check_trunc, dist_sq, Dataset, Label};

use super::{floor_root, split_select_d, Classifier};

/// k-nearest-neighbor rule on the first `d` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    points: Vec<f64>,
    labels: Vec<u8>,
    k: usize,
    d: usize,
}

impl KnnModel {
    /// Stores the projected training sample.
    pub fn fit(data: &Dataset, d: usize, k: usize) -> Result<Self> {
        let n = data.len();
        if n == 0 {
            return Err(Error::invalid("cannot fit kNN on an empty dataset"));
        }
        check_trunc(d, data.dim())?;
        if k == 0 || k > n {
            return Err(Error::invalid(format!("k = {k} outside 1..={n}")));
        }
        let mut points = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        for p in data.points() {
            points.extend_from_slice(&p.x.as_slice()[..d]);
            labels.push(p.y.as_u8());
        }
        Ok(KnnModel { points, labels, k, d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn by_distance_then_index(a: &(f64, u32), b: &(f64, u32)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl KnnModel {
    /// Number of label-1 points among the `k` nearest (distance ties broken
    /// by training index).
    fn ones_among_neighbors(&self, x: &[f64]) -> usize {
        let x = &x[..self.d];
        let dists = self.points.chunks_exact(self.d).map(|p| dist_sq(p, x));
        if self.k == 1 {
            let best = dists
                .enumerate()
                .map(|(i, dd)| (dd, i as u32))
                .min_by(by_distance_then_index)
                .expect("non-empty training set");
            return self.labels[best.1 as usize] as usize;
        }
        let mut keyed: Vec<(f64, u32)> = dists.enumerate().map(|(i, dd)| (dd, i as u32)).collect();
        if self.k < keyed.len() {
            keyed.select_nth_unstable_by(self.k - 1, by_distance_then_index);
        }
        keyed[..self.k]
            .iter()
            .map(|&(_, i)| self.labels[i as usize] as usize)
            .sum()
    }

    /// Fraction of label-1 votes, the kNN estimate of η.
    pub fn vote_fraction(&self, x: &[f64]) -> Result<f64> {
        if x.len() < self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: x.len(),
            });
        }
        Ok(self.ones_among_neighbors(x) as f64 / self.k as f64)
    }
}

impl Classifier for KnnModel {
    /// Majority vote of the `k` nearest points; label 1 needs strictly more
    /// than half the votes.
    fn classify(&self, x: &[f64]) -> Label {
        Label::from_bool(2 * self.ones_among_neighbors(x) > self.k)
    }
}

/// kNN decision for one point in `R^d`.
pub fn knn_classify(model: &KnnModel, x: &[f64]) -> Result<Label> {
    if x.len() < model.d {
        return Err(Error::DimensionMismatch {
            expected: model.d,
            actual: x.len(),
        });
    }
    Ok(model.classify(x))
}

/// `max(1, ⌊n^{4/(4+d)}⌋)`.
pub fn optimal_k(n: usize, d: usize) -> usize {
    assert!(d >= 1, "dimension must be positive");
    floor_root(n as f64, (4.0 + d as f64) / 4.0).max(1) as usize
}

/// Whether `k` lies in the range where the `C/k` excess-risk floor applies:
/// `1/√k ≥ d·(k/n)^{2/d}`. Equality cases such as `k = 8, n = 1024, d = 4`
/// are accepted despite rounding.
pub fn admissible_k(k: usize, n: usize, d: usize) -> bool {
    assert!(k >= 1 && d >= 1 && n >= 1, "k, n, d must be positive");
    let (k, n, d) = (k as f64, n as f64, d as f64);
    1.0 / k.sqrt() >= d * (k / n).powf(2.0 / d) * (1.0 - 1e-12)
}

/// Largest admissible `k ≤ n`, if any. The left side of the predicate
/// decreases in `k` and the right side increases, so the admissible set is
/// an initial segment.
pub fn max_admissible_k(n: usize, d: usize) -> Option<usize> {
    (1..=n).take_while(|&k| admissible_k(k, n, d)).last()
}

/// Chooses a truncation level for kNN using only the first half `S₁` of the
/// sample, with `k = optimal_k(|S₂|, d)` for each candidate; see
/// [`split_select_d`].
pub fn sample_split_select_d(data: &Dataset, candidates: &[usize], seed: u64) -> Result<usize> {
    split_select_d(data, candidates, seed, |fit, d, n2| {
        KnnModel::fit(fit, d, optimal_k(n2.max(1), d).min(fit.len()))
    })
}
