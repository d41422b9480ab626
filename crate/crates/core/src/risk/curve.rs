use rayon::prelude::*;

use crate::classifiers::{
    dn_rule, fit_plugin, optimal_k, plugin_split_select_d, sample_split_select_d, BayesRule, Classifier, KnnModel,
};
use crate::config::{ClassifierKind, DRule, ExperimentConfig, KRule};
use crate::error::{Error, Result};
use crate::model::{default_ambient_dim, make_pair_with_separation, sample_dataset, Dataset, ModelPair, SobolevSpec};
use crate::rng::derive_seed;
use crate::stats::{ols, Moments};

use super::mc::{bayes_risk_exact, mc_excess_risk};

/// One row of a risk curve: the excess risk of a classifier at sample size
/// `n`, averaged over training replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    /// Truncation level used (the most frequent one across replicates when
    /// it is data-driven).
    pub d: usize,
    /// Neighbor count for kNN, 0 otherwise.
    pub k: usize,
    pub delta: f64,
    pub excess_mean: f64,
    pub excess_stderr: f64,
    pub bayes_risk: f64,
    pub classifier: ClassifierKind,
}

/// Output of [`risk_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub ambient_dim: usize,
    /// Sorted by `n`.
    pub rows: Vec<CurveRow>,
}

/// Least-squares fit of `log excess = intercept + slope·log n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(log n, log excess)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Per-replicate outcome.
#[derive(Debug, Clone, Copy)]
struct Unit {
    excess: f64,
    mc_stderr: f64,
    d: usize,
    k: usize,
}

/// Seeds of replicate `r` at sample size `n`.
#[derive(Debug, Clone, Copy)]
struct UnitSeeds {
    data: u64,
    mc: u64,
    split: u64,
}

impl UnitSeeds {
    fn new(master: u64, n: usize, r: usize) -> Self {
        let path = |tag: u64| derive_seed(master, &[tag, n as u64, r as u64]);
        UnitSeeds {
            data: path(1),
            mc: path(2),
            split: path(3),
        }
    }
}

fn clamp_d(d: usize, dim: usize) -> usize {
    d.clamp(1, dim)
}

/// Truncation level of a non-data-driven rule.
pub(crate) fn static_d(rule: DRule, n: usize, spec: SobolevSpec, dim: usize) -> Option<usize> {
    match rule {
        DRule::Dn => Some(clamp_d(dn_rule(n, spec), dim)),
        DRule::Fixed(d) => Some(d),
        DRule::Split => None,
    }
}

fn largest_d(cfg: &ExperimentConfig, spec: SobolevSpec) -> usize {
    let n_max = cfg.n_grid.last().copied().unwrap_or(1);
    let from_rule = match cfg.d_rule {
        DRule::Dn => dn_rule(n_max, spec).max(1),
        DRule::Fixed(d) => d,
        DRule::Split => cfg.d_candidates.iter().copied().max().unwrap_or(1),
    };
    match cfg.classifier {
        ClassifierKind::Bayes => 1,
        _ => from_rule,
    }
}

/// Ambient dimension of an experiment: `ambient_D` if set, otherwise
/// `max(256, 4·d)` for the largest truncation level the run can use.
pub fn experiment_dim(cfg: &ExperimentConfig) -> Result<usize> {
    let spec = cfg.spec()?;
    let need = largest_d(cfg, spec);
    let need = need.max(cfg.d_candidates.iter().copied().max().unwrap_or(1));
    match cfg.ambient_dim {
        Some(dim) => {
            if let DRule::Fixed(d) = cfg.d_rule {
                if d > dim {
                    return Err(Error::invalid(format!("d_rule fixed:{d} exceeds ambient_D = {dim}")));
                }
            }
            Ok(dim)
        }
        None => Ok(default_ambient_dim(need)),
    }
}

/// The pair used at sample size `n`.
pub fn experiment_pair(cfg: &ExperimentConfig, n: usize, dim: usize) -> Result<ModelPair> {
    let spec = cfg.spec()?;
    make_pair_with_separation(spec, cfg.delta_policy.delta(n, spec), dim, cfg.master_seed)
}

pub(crate) fn knn_k(rule: KRule, train_len: usize, d: usize) -> usize {
    match rule {
        KRule::Optimal => optimal_k(train_len, d),
        KRule::Fixed(k) => k,
    }
    .clamp(1, train_len)
}

/// kNN after sample splitting: `d̂` from the first half, rule trained on the
/// second half.
pub(crate) fn split_knn(data: &Dataset, candidates: &[usize], k_rule: KRule, seed: u64) -> Result<KnnModel> {
    let dim = data.dim();
    let candidates: Vec<usize> = candidates.iter().map(|&d| clamp_d(d, dim)).collect();
    let d = sample_split_select_d(data, &candidates, seed)?;
    let (_, second) = data.split_at(data.len().div_ceil(2));
    KnnModel::fit(&second, d, knn_k(k_rule, second.len(), d))
}

fn excess_unit(rule: &dyn Classifier, pair: &ModelPair, cfg: &ExperimentConfig, seed: u64, d: usize, k: usize) -> Result<Unit> {
    let e = mc_excess_risk(rule, pair, cfg.mc_inner, seed)?;
    Ok(Unit {
        excess: e.mean,
        mc_stderr: e.stderr,
        d,
        k,
    })
}

fn run_unit(cfg: &ExperimentConfig, pair: &ModelPair, n: usize, seeds: UnitSeeds) -> Result<Unit> {
    let spec = pair.spec();
    let dim = pair.dim();
    match cfg.classifier {
        ClassifierKind::Bayes => excess_unit(&BayesRule::new(pair), pair, cfg, seeds.mc, dim, 0),
        ClassifierKind::TruncatedBayes => {
            let d = static_d(cfg.d_rule, n, spec, dim)
                .ok_or_else(|| Error::invalid("d_rule = split is not defined for truncated_bayes"))?;
            excess_unit(&BayesRule::truncated(pair, d)?, pair, cfg, seeds.mc, d, 0)
        }
        ClassifierKind::Plugin => {
            let data = sample_dataset(pair, n, seeds.data)?;
            let d = match static_d(cfg.d_rule, n, spec, dim) {
                Some(d) => d,
                None => plugin_split_select_d(&data, &clamped(&cfg.d_candidates, dim), seeds.split)?,
            };
            excess_unit(&fit_plugin(&data, d)?, pair, cfg, seeds.mc, d, 0)
        }
        ClassifierKind::Knn => {
            let data = sample_dataset(pair, n, seeds.data)?;
            let model = match static_d(cfg.d_rule, n, spec, dim) {
                Some(d) => KnnModel::fit(&data, d, knn_k(cfg.k_rule, n, d))?,
                None => split_knn(&data, &cfg.d_candidates, cfg.k_rule, seeds.split)?,
            };
            excess_unit(&model, pair, cfg, seeds.mc, model.d(), model.k())
        }
    }
}

pub(crate) fn clamped(candidates: &[usize], dim: usize) -> Vec<usize> {
    candidates.iter().map(|&d| clamp_d(d, dim)).collect()
}

/// Most frequent value, smallest on ties.
fn mode(values: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = values.collect();
    v.sort_unstable();
    let mut best = (0, 0);
    let mut i = 0;
    while i < v.len() {
        let j = v[i..].iter().take_while(|&&x| x == v[i]).count();
        if j > best.1 {
            best = (v[i], j);
        }
        i += j;
    }
    best.0
}

/// Mean and standard error across replicates; with a single replicate the
/// inner Monte Carlo error is reported.
fn summarize(units: &[Unit]) -> (f64, f64) {
    let m: Moments = units.iter().map(|u| u.excess).collect();
    if units.len() >= 2 {
        (m.mean, m.stderr())
    } else {
        (m.mean, units[0].mc_stderr)
    }
}

/// Runs `replicate(n, r)` for every `(n, r)` in the grid, in parallel,
/// returning results grouped by `n` in replicate order.
fn over_grid<T, F>(cfg: &ExperimentConfig, replicate: F) -> Result<Vec<Vec<T>>>
where
    T: Send,
    F: Fn(usize, usize) -> Result<T> + Sync,
{
    let t = cfg.mc_outer;
    let jobs: Vec<(usize, usize)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| (0..t).map(move |r| (n, r)))
        .collect();
    let mut flat = jobs
        .into_par_iter()
        .map(|(n, r)| replicate(n, r))
        .collect::<Result<Vec<T>>>()?
        .into_iter();
    Ok(cfg.n_grid.iter().map(|_| flat.by_ref().take(t).collect()).collect())
}

/// Excess risk of the configured classifier along the `n` grid.
pub fn risk_curve(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let dim = experiment_dim(cfg)?;
    let pairs = cfg
        .n_grid
        .iter()
        .map(|&n| experiment_pair(cfg, n, dim))
        .collect::<Result<Vec<_>>>()?;
    let by_n = over_grid(cfg, |n, r| {
        let i = cfg.n_grid.iter().position(|&m| m == n).expect("n from grid");
        run_unit(cfg, &pairs[i], n, UnitSeeds::new(cfg.master_seed, n, r))
    })?;
    let rows = cfg
        .n_grid
        .iter()
        .zip(&pairs)
        .zip(&by_n)
        .map(|((&n, pair), units)| {
            let delta = cfg.delta_policy.delta(n, pair.spec());
            let (excess_mean, excess_stderr) = summarize(units);
            CurveRow {
                n,
                d: mode(units.iter().map(|u| u.d)),
                k: mode(units.iter().map(|u| u.k)),
                delta,
                excess_mean,
                excess_stderr,
                bayes_risk: bayes_risk_exact(delta),
                classifier: cfg.classifier,
            }
        })
        .collect();
    Ok(ExperimentResult {
        config: cfg.clone(),
        ambient_dim: dim,
        rows,
    })
}

/// Fits `log y = intercept + slope·log n` over points with `y > 0`.
pub fn fit_log_log(points: &[(usize, f64)]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, y)| y > 0.0 && n > 0)
        .map(|&(n, y)| ((n as f64).ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData {
            usable: pts.len(),
            needed: 3,
        });
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let (slope, intercept, r_squared) = ols(&x, &y);
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        points: pts,
    })
}

/// Log-log slope of mean excess against `n`; rows with non-positive means
/// are dropped.
pub fn rate_fit(result: &ExperimentResult) -> Result<RateFit> {
    let pts: Vec<(usize, f64)> = result.rows.iter().map(|r| (r.n, r.excess_mean)).collect();
    fit_log_log(&pts)
}

/// Which rule a [`CompareRow`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMethod {
    Plugin,
    Knn,
}

impl CompareMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CompareMethod::Plugin => "plugin",
            CompareMethod::Knn => "knn",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub n: usize,
    pub method: CompareMethod,
    pub d: usize,
    pub k: usize,
    pub excess_mean: f64,
    pub excess_stderr: f64,
}

/// Plug-in against kNN on the same training sets.
///
/// The plug-in rule uses the configured `d_rule` on the whole sample. kNN
/// always picks `d̂` among `d_candidates` on the first half and is trained
/// on the second half with the configured `k_rule`. Emits one row per
/// `(n, method)`, plug-in first.
pub fn knn_compare(cfg: &ExperimentConfig) -> Result<Vec<CompareRow>> {
    let dim = experiment_dim(cfg)?;
    let pairs = cfg
        .n_grid
        .iter()
        .map(|&n| experiment_pair(cfg, n, dim))
        .collect::<Result<Vec<_>>>()?;
    let by_n = over_grid(cfg, |n, r| {
        let i = cfg.n_grid.iter().position(|&m| m == n).expect("n from grid");
        let pair = &pairs[i];
        let seeds = UnitSeeds::new(cfg.master_seed, n, r);
        let data = sample_dataset(pair, n, seeds.data)?;
        let d = match static_d(cfg.d_rule, n, pair.spec(), dim) {
            Some(d) => d,
            None => plugin_split_select_d(&data, &clamped(&cfg.d_candidates, dim), seeds.split)?,
        };
        let plugin = excess_unit(&fit_plugin(&data, d)?, pair, cfg, seeds.mc, d, 0)?;
        let knn = split_knn(&data, &cfg.d_candidates, cfg.k_rule, seeds.split)?;
        let knn = excess_unit(&knn, pair, cfg, seeds.mc, knn.d(), knn.k())?;
        Ok((plugin, knn))
    })?;
    let mut rows = Vec::with_capacity(2 * cfg.n_grid.len());
    for (&n, units) in cfg.n_grid.iter().zip(&by_n) {
        for method in [CompareMethod::Plugin, CompareMethod::Knn] {
            let us: Vec<Unit> = units
                .iter()
                .map(|(p, k)| if method == CompareMethod::Plugin { *p } else { *k })
                .collect();
            let (excess_mean, excess_stderr) = summarize(&us);
            rows.push(CompareRow {
                n,
                method,
                d: mode(us.iter().map(|u| u.d)),
                k: mode(us.iter().map(|u| u.k)),
                excess_mean,
                excess_stderr,
            });
        }
    }
    Ok(rows)
}
