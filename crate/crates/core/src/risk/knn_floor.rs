use rayon::prelude::*;

use crate::classifiers::{admissible_k, max_admissible_k, optimal_k, KnnModel};
use crate::error::{Error, Result};
use crate::model::{sample_dataset, ModelPair};
use crate::rng::derive_seed;
use crate::stats::{correlation, ols, Moments};

use super::mc::mc_excess_risk;

/// How the `k` of a [`FloorRow`] was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    /// `optimal_k(n, d)`.
    Optimal,
    /// Largest `k` in the admissible range.
    MaxAdmissible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloorRow {
    pub n: usize,
    pub k: usize,
    pub choice: KChoice,
    /// Whether `1/√k ≥ d·(k/n)^{2/d}`; rows outside the range are kept but
    /// flagged.
    pub admissible: bool,
    pub excess: f64,
    pub stderr: f64,
    pub inv_k: f64,
}

/// Summary of [`knn_floor_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloorReport {
    pub d: usize,
    pub rows: Vec<FloorRow>,
    /// Least-squares `C` in `excess ≈ C/k` over admissible rows.
    pub floor_constant: f64,
    /// Slope of `log excess` on `log(1/k)` over admissible rows.
    pub slope: f64,
    /// Correlation of `log excess` and `log(1/k)` over admissible rows.
    pub correlation: f64,
}

/// Excess risk of kNN on the full `d`-dimensional problem of `pair` for
/// `k = optimal_k(n, d)` and for the largest admissible `k`, at each `n`.
///
/// The pair's own dimension is used as `d`, so the Bayes oracle is exact.
/// Each row averages `replicates` training sets, each scored with `n_mc`
/// test draws.
pub fn knn_floor_check(
    pair: &ModelPair,
    n_grid: &[usize],
    replicates: usize,
    n_mc: usize,
    seed: u64,
) -> Result<FloorReport> {
    let d = pair.dim();
    if replicates == 0 || n_grid.is_empty() {
        return Err(Error::invalid("need at least one n and one replicate"));
    }
    let mut specs = Vec::new();
    for &n in n_grid {
        let k_opt = optimal_k(n, d).min(n);
        specs.push((n, k_opt, KChoice::Optimal));
        if let Some(k) = max_admissible_k(n, d) {
            if k != k_opt {
                specs.push((n, k, KChoice::MaxAdmissible));
            }
        }
    }
    let rows = specs
        .par_iter()
        .map(|&(n, k, choice)| {
            let values = (0..replicates)
                .into_par_iter()
                .map(|r| {
                    let data = sample_dataset(pair, n, derive_seed(seed, &[1, n as u64, r as u64]))?;
                    let model = KnnModel::fit(&data, d, k)?;
                    Ok(mc_excess_risk(&model, pair, n_mc, derive_seed(seed, &[2, n as u64, r as u64]))?.mean)
                })
                .collect::<Result<Vec<f64>>>()?;
            let m: Moments = values.into_iter().collect();
            Ok(FloorRow {
                n,
                k,
                choice,
                admissible: admissible_k(k, n, d),
                excess: m.mean,
                stderr: m.stderr(),
                inv_k: 1.0 / k as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let adm: Vec<&FloorRow> = rows.iter().filter(|r| r.admissible).collect();
    let floor_constant = adm.iter().map(|r| r.excess * r.inv_k).sum::<f64>() / adm.iter().map(|r| r.inv_k * r.inv_k).sum::<f64>();
    let logs: Vec<(f64, f64)> = adm
        .iter()
        .filter(|r| r.excess > 0.0)
        .map(|r| (r.inv_k.ln(), r.excess.ln()))
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = logs.into_iter().unzip();
    let (slope, correlation) = if x.len() >= 2 {
        (ols(&x, &y).0, correlation(&x, &y))
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(FloorReport {
        d,
        rows,
        floor_constant,
        slope,
        correlation,
    })
}
