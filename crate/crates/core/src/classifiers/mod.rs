//! Classification rules: Bayes oracles, the plug-in nearest-centroid rule,
//! and the k-nearest-neighbor baseline.

mod bayes;
mod knn;
mod plugin;

pub use bayes::{bayes_classify, eta_d, eta_full, truncated_bayes_classify, BayesRule};
pub use knn::{admissible_k, knn_classify, max_admissible_k, optimal_k, sample_split_select_d, KnnModel};
pub use plugin::{dn_rule, eta_hat, fit_plugin, plugin_classify, plugin_split_select_d, PluginModel};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::model::{check_trunc, Dataset, Label};
use crate::rng;

/// A fitted decision rule applied to raw coefficient slices.
///
/// Slices may be longer than the rule's own dimension; rules that work on a
/// truncation only read the leading coordinates.
pub trait Classifier: Sync {
    fn classify(&self, x: &[f64]) -> Label;
}

impl<F> Classifier for F
where
    F: Fn(&[f64]) -> Label + Sync,
{
    fn classify(&self, x: &[f64]) -> Label {
        self(x)
    }
}

/// Chooses a truncation level using only the first half `S₁` of the sample.
///
/// `S₁` (the first `⌈n/2⌉` points) is shuffled with `seed` and split again
/// into a fitting part and a validation part. `fit(part, d, n2)` builds the
/// rule for candidate `d`, where `n2 = n − ⌈n/2⌉` is the size of the second
/// half the final rule will be trained on. The candidate with the fewest
/// validation errors wins; ties go to the smaller `d`.
pub fn split_select_d<C, F>(data: &Dataset, candidates: &[usize], seed: u64, fit: F) -> Result<usize>
where
    C: Classifier,
    F: Fn(&Dataset, usize, usize) -> Result<C>,
{
    let n = data.len();
    if n < 2 {
        return Err(Error::invalid(format!("sample splitting needs n >= 2, got {n}")));
    }
    if candidates.is_empty() {
        return Err(Error::invalid("no candidate dimensions"));
    }
    for &d in candidates {
        check_trunc(d, data.dim())?;
    }
    let n1 = n.div_ceil(2);
    let mut s1: Vec<_> = data.points()[..n1].to_vec();
    s1.shuffle(&mut rng::stream(seed, &[0x5911]));
    let fit_len = n1.div_ceil(2);
    let validation = &s1[fit_len..];
    let fit_part = Dataset::new(s1[..fit_len].to_vec())?;

    let mut best: Option<(usize, usize)> = None; // (errors, d)
    for &d in candidates {
        let rule = fit(&fit_part, d, n - n1)?;
        let errors = validation
            .iter()
            .filter(|p| rule.classify(p.x.as_slice()) != p.y)
            .count();
        best = match best {
            Some((e, bd)) if e < errors || (e == errors && bd <= d) => Some((e, bd)),
            _ => Some((errors, d)),
        };
    }
    Ok(best.expect("non-empty candidates").1)
}

/// Largest integer `k ≥ 0` with `k^power ≤ target`, robust to the rounding
/// of `powf` at exact powers (e.g. `1000^{1/3}`).
pub(crate) fn floor_root(target: f64, power: f64) -> u64 {
    if target < 1.0 {
        return 0;
    }
    let mut k = target.powf(1.0 / power).floor() as u64;
    let fits = |k: u64| (k as f64).powf(power) <= target * (1.0 + 1e-12);
    while fits(k + 1) {
        k += 1;
    }
    while k > 0 && !fits(k) {
        k -= 1;
    }
    k
}
