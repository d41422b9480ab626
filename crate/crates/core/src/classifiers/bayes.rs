use crate::error::{Error, Result};
use crate::model::{check_trunc, dot, CoefVec, Label, ModelPair};
use crate::stats::eta_from_log_odds;

use super::Classifier;

/// Precomputed Bayes rule of a pair, optionally truncated to `d` coordinates.
///
/// The log-likelihood ratio of class 1 against class 0 is the affine form
/// `⟨w, x⟩ − b` with `w = f − g` and `b = ½(‖f‖² − ‖g‖²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesRule {
    w: Vec<f64>,
    b: f64,
}

impl BayesRule {
    pub fn new(pair: &ModelPair) -> Self {
        Self::truncated(pair, pair.dim()).expect("full truncation is always valid")
    }

    pub fn truncated(pair: &ModelPair, d: usize) -> Result<Self> {
        check_trunc(d, pair.dim())?;
        let f = &pair.f().as_slice()[..d];
        let g = &pair.g().as_slice()[..d];
        let w = f.iter().zip(g).map(|(a, b)| a - b).collect();
        let b = 0.5 * (dot(f, f) - dot(g, g));
        Ok(BayesRule { w, b })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Log-odds `log(η / (1 − η))` at `x`.
    pub fn log_odds(&self, x: &[f64]) -> f64 {
        dot(&self.w, &x[..self.w.len()]) - self.b
    }

    pub fn eta(&self, x: &[f64]) -> f64 {
        eta_from_log_odds(self.log_odds(x))
    }
}

impl Classifier for BayesRule {
    /// Ties (`η = 1/2`) go to label 1.
    fn classify(&self, x: &[f64]) -> Label {
        Label::from_bool(dot(&self.w, &x[..self.w.len()]) >= self.b)
    }
}

fn check_dim(pair: &ModelPair, x: &CoefVec) -> Result<()> {
    if x.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            actual: x.dim(),
        });
    }
    Ok(())
}

/// Regression function `η(x) = P(Y = 1 | X = x)`.
pub fn eta_full(pair: &ModelPair, x: &CoefVec) -> Result<f64> {
    check_dim(pair, x)?;
    Ok(BayesRule::new(pair).eta(x.as_slice()))
}

/// Bayes classifier `1{η(x) ≥ 1/2}`.
pub fn bayes_classify(pair: &ModelPair, x: &CoefVec) -> Result<Label> {
    check_dim(pair, x)?;
    Ok(BayesRule::new(pair).classify(x.as_slice()))
}

/// Truncated regression function: `η` of the pair projected on the first `d`
/// coordinates, evaluated at the projected observation.
pub fn eta_d(pair: &ModelPair, x: &CoefVec, d: usize) -> Result<f64> {
    check_dim(pair, x)?;
    Ok(BayesRule::truncated(pair, d)?.eta(x.as_slice()))
}

/// Truncated Bayes classifier `1{η_d(x) ≥ 1/2}`.
pub fn truncated_bayes_classify(pair: &ModelPair, x: &CoefVec, d: usize) -> Result<Label> {
    check_dim(pair, x)?;
    Ok(BayesRule::truncated(pair, d)?.classify(x.as_slice()))
}
