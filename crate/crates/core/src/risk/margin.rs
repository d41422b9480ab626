use std::f64::consts::PI;

use crate::classifiers::BayesRule;
use crate::error::{Error, Result};
use crate::model::{separation, ModelPair};

use super::mc::{mixture_average, RiskEstimate, RiskKind};

/// Upper bound `min(1, 10ε/Δ)` on `P(|η − 1/2| ≤ ε)`, stated for `ε ≤ 1/8`.
pub fn margin_upper_bound(delta: f64, eps: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (10.0 * eps / delta).min(1.0)
    }
}

/// Lower bound `(2π)^{-1/2}·min((ε/Δ)e^{-(1+Δ/2)²/2}, e^{-1/2}/2)` on
/// `P(|η − 1/2| ≤ ε)`, stated for `ε < 1/4`.
pub fn margin_lower_bound(delta: f64, eps: f64) -> f64 {
    let a = (-(1.0 + delta / 2.0).powi(2) / 2.0).exp();
    let first = if delta <= 0.0 { f64::INFINITY } else { eps / delta * a };
    first.min((-0.5f64).exp() / 2.0) / (2.0 * PI).sqrt()
}

/// Inner radius factor of the crown, `δ = e^{-(1+Δ/2)²/2} / (2√(2π))`.
pub fn crown_delta(delta: f64) -> f64 {
    (-(1.0 + delta / 2.0).powi(2) / 2.0).exp() / (2.0 * (2.0 * PI).sqrt())
}

/// Lower bound `δε/Δ` on the crown probability.
pub fn crown_lower_bound(delta: f64, eps: f64) -> f64 {
    crown_delta(delta) * eps / delta
}

/// Frequency of `|η(X) − 1/2| ≤ ε` over mixture draws.
pub fn margin_prob(pair: &ModelPair, eps: f64, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("margin width must be > 0, got {eps}")));
    }
    band_frequency(pair, 0.0, eps, n_mc, seed)
}

/// Frequency of the crown `δε ≤ |η(X) − 1/2| ≤ ε`, for
/// `0 < ε ≤ min(1/4, Δ)`.
pub fn crown_prob(pair: &ModelPair, eps: f64, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    let delta = separation(pair, None)?;
    let max = delta.min(0.25);
    if !(eps > 0.0 && eps <= max) {
        return Err(Error::invalid(format!(
            "crown width must satisfy 0 < eps <= min(1/4, delta) = {max}, got {eps}"
        )));
    }
    band_frequency(pair, crown_delta(delta) * eps, eps, n_mc, seed)
}

fn band_frequency(pair: &ModelPair, lo: f64, hi: f64, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    let bayes = BayesRule::new(pair);
    let m = mixture_average(pair, n_mc, seed, |x, _| {
        let gap = (bayes.eta(x) - 0.5).abs();
        if gap >= lo && gap <= hi {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(RiskEstimate {
        mean: m.mean,
        stderr: (m.mean * (1.0 - m.mean) / n_mc as f64).max(0.0).sqrt(),
        n_mc,
        kind: RiskKind::Probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_pair_with_separation, SobolevSpec};

    fn pair(delta: f64) -> ModelPair {
        make_pair_with_separation(SobolevSpec::new(1.0, 3.0).unwrap(), delta, 6, 2).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(margin_upper_bound(4.0, 0.125), 0.3125);
        assert_eq!(margin_upper_bound(0.5, 0.125), 1.0);
        let lb = margin_lower_bound(1.0, 0.1);
        let oracle = (0.1 * (-1.125f64).exp()).min((-0.5f64).exp() / 2.0) / (2.0 * PI).sqrt();
        assert!((lb - oracle).abs() < 1e-15);
        assert!((crown_delta(1.0) - 0.064_77).abs() < 5e-5);
    }

    #[test]
    fn wide_margin_covers_everything() {
        let m = margin_prob(&pair(1.0), 0.5, 10_000, 1).unwrap();
        assert_eq!(m.mean, 1.0);
        assert!(margin_prob(&pair(1.0), 0.0, 10, 1).is_err());
    }

    #[test]
    fn margin_respects_both_bounds() {
        let m = margin_prob(&pair(4.0), 0.125, 200_000, 3).unwrap();
        assert!(m.mean <= margin_upper_bound(4.0, 0.125) + 3.0 * m.stderr);
        let m = margin_prob(&pair(1.0), 0.1, 200_000, 4).unwrap();
        assert!(m.mean >= margin_lower_bound(1.0, 0.1) - 3.0 * m.stderr);
    }

    #[test]
    fn crown_bound_inclusion_and_domain() {
        let p = pair(1.0);
        let c = crown_prob(&p, 0.2, 200_000, 5).unwrap();
        assert!(c.mean >= crown_lower_bound(1.0, 0.2) - 3.0 * c.stderr, "{c:?}");
        let m = margin_prob(&p, 0.2, 200_000, 5).unwrap();
        // same draws, nested events
        assert!(c.mean <= m.mean);
        let tiny = crown_prob(&p, 1e-6, 100_000, 6).unwrap();
        assert!(tiny.mean < 1e-3);
        assert!(crown_prob(&p, 0.3, 10, 1).is_err());
        assert!(crown_prob(&pair(0.1), 0.2, 10, 1).is_err());
        assert!(crown_prob(&p, 0.0, 10, 1).is_err());
    }
}
