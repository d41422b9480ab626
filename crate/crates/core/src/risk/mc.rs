use rayon::prelude::*;

use crate::classifiers::{BayesRule, Classifier};
use crate::error::{Error, Result};
use crate::model::{Label, MixtureSampler, ModelPair};
use crate::rng;
use crate::stats::{normal_cdf, Moments};

/// What a [`RiskEstimate`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskKind {
    Misclassification,
    Excess,
    /// Frequency of an event, e.g. a margin or crown probability.
    Probability,
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_mc: usize,
    pub kind: RiskKind,
}

impl RiskEstimate {
    fn binomial(hits: f64, n_mc: usize, kind: RiskKind) -> Self {
        let p = hits / n_mc as f64;
        RiskEstimate {
            mean: p,
            stderr: (p * (1.0 - p) / n_mc as f64).max(0.0).sqrt(),
            n_mc,
            kind,
        }
    }
}

/// Exact risk of the Bayes rule, `Φ(−Δ/2)`.
pub fn bayes_risk_exact(delta: f64) -> f64 {
    normal_cdf(-delta / 2.0)
}

/// Averages `value(x, y)` over `n_mc` mixture draws.
///
/// Draws are grouped in fixed blocks with their own streams and the block
/// moments are merged in block order, so the result does not depend on the
/// number of worker threads.
pub(crate) fn mixture_average<F>(pair: &ModelPair, n_mc: usize, seed: u64, value: F) -> Result<Moments>
where
    F: Fn(&[f64], Label) -> f64 + Sync,
{
    if n_mc == 0 {
        return Err(Error::invalid("n_mc must be >= 1"));
    }
    let parts: Vec<Moments> = rng::blocks(n_mc)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut stream = rng::stream(seed, &[b]);
            let mut sampler = MixtureSampler::new(pair);
            let mut m = Moments::default();
            for _ in 0..len {
                let (x, y) = sampler.draw(&mut stream);
                m.push(value(x, y));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Misclassification frequency of `rule` on `n_mc` fresh draws, with the
/// binomial standard error.
pub fn mc_risk(rule: &dyn Classifier, pair: &ModelPair, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    let m = mixture_average(pair, n_mc, seed, |x, y| indicator(rule.classify(x) != y))?;
    Ok(RiskEstimate::binomial(m.mean * n_mc as f64, n_mc, RiskKind::Misclassification))
}

/// Excess risk of `rule` over the Bayes rule of `pair`, estimated by the
/// conditional form `E[|2η(X) − 1|·1{rule(X) ≠ Φ*(X)}]`.
pub fn mc_excess_risk(rule: &dyn Classifier, pair: &ModelPair, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    let bayes = BayesRule::new(pair);
    let m = mixture_average(pair, n_mc, seed, |x, _| {
        let star = bayes.classify(x);
        if rule.classify(x) == star {
            0.0
        } else {
            (2.0 * bayes.eta(x) - 1.0).abs()
        }
    })?;
    Ok(RiskEstimate {
        mean: m.mean,
        stderr: m.stderr(),
        n_mc,
        kind: RiskKind::Excess,
    })
}
