use crate::error::{Error, Result};
use crate::model::{check_trunc, dist_sq, CoefVec, Dataset, Label, SobolevSpec};
use crate::stats::eta_from_log_odds;

use super::{floor_root, split_select_d, Classifier};

/// Fitted nearest-centroid rule on the first `d` coordinates.
///
/// `theta_hat` is the class-1 centroid and `mu_hat` the class-0 centroid; an
/// empty class has its centroid set to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PluginModel {
    pub theta_hat: CoefVec,
    pub mu_hat: CoefVec,
    pub d: usize,
    pub n0: usize,
    pub n1: usize,
}

impl PluginModel {
    /// Half the difference of squared distances to the two centroids. This
    /// equals `⟨θ̂ − μ̂, x⟩ − ½‖θ̂‖² + ½‖μ̂‖²`, the estimated log-odds.
    fn discriminant(&self, x: &[f64]) -> f64 {
        let x = &x[..self.d];
        0.5 * (dist_sq(x, self.mu_hat.as_slice()) - dist_sq(x, self.theta_hat.as_slice()))
    }

    fn check(&self, x: &CoefVec) -> Result<()> {
        if x.dim() < self.d {
            return Err(Error::invalid(format!(
                "observation has dimension {} < model truncation {}",
                x.dim(),
                self.d
            )));
        }
        Ok(())
    }
}

impl Classifier for PluginModel {
    /// `1` iff `‖Π_d x − θ̂‖ ≤ ‖Π_d x − μ̂‖`.
    fn classify(&self, x: &[f64]) -> Label {
        let x = &x[..self.d];
        Label::from_bool(dist_sq(x, self.theta_hat.as_slice()) <= dist_sq(x, self.mu_hat.as_slice()))
    }
}

/// Class-conditional coordinate means over the first `d` coordinates.
pub fn fit_plugin(data: &Dataset, d: usize) -> Result<PluginModel> {
    if data.is_empty() {
        return Err(Error::invalid("cannot fit on an empty dataset"));
    }
    check_trunc(d, data.dim())?;
    let mut sums = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0usize; 2];
    for p in data.points() {
        let k = p.y.as_u8() as usize;
        counts[k] += 1;
        for (s, x) in sums[k].iter_mut().zip(p.x.as_slice()) {
            *s += x;
        }
    }
    let [s0, s1] = sums;
    let mean = |s: Vec<f64>, c: usize| {
        let v = if c == 0 {
            vec![0.0; d]
        } else {
            s.into_iter().map(|x| x / c as f64).collect()
        };
        CoefVec::new(v)
    };
    Ok(PluginModel {
        theta_hat: mean(s1, counts[1])?,
        mu_hat: mean(s0, counts[0])?,
        d,
        n0: counts[0],
        n1: counts[1],
    })
}

/// Plug-in decision for one observation.
pub fn plugin_classify(model: &PluginModel, x: &CoefVec) -> Result<Label> {
    model.check(x)?;
    Ok(model.classify(x.as_slice()))
}

/// Estimated regression function; `eta_hat ≥ 1/2` exactly when
/// [`plugin_classify`] returns 1.
pub fn eta_hat(model: &PluginModel, x: &CoefVec) -> Result<f64> {
    model.check(x)?;
    Ok(eta_from_log_odds(model.discriminant(x.as_slice())))
}

/// Sample-split choice of the plug-in truncation level (see
/// [`split_select_d`]).
pub fn plugin_split_select_d(data: &Dataset, candidates: &[usize], seed: u64) -> Result<usize> {
    split_select_d(data, candidates, seed, |fit, d, _| fit_plugin(fit, d))
}

/// Truncation level `⌊(R² n)^{1/(2s+1)}⌋`. May be 0 for tiny `R²n`; callers
/// clamp to `[1, D]`.
pub fn dn_rule(n: usize, spec: SobolevSpec) -> usize {
    let r2n = spec.radius() * spec.radius() * n as f64;
    floor_root(r2n, 2.0 * spec.s() + 1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_pair_with_separation, project, sample_dataset_with_noise, LabeledPoint};

    fn model(theta: Vec<f64>, mu: Vec<f64>) -> PluginModel {
        PluginModel {
            d: theta.len(),
            theta_hat: CoefVec::new(theta).unwrap(),
            mu_hat: CoefVec::new(mu).unwrap(),
            n0: 1,
            n1: 1,
        }
    }

    #[test]
    fn single_point_uses_empty_class_convention() {
        let x = CoefVec::new(vec![0.5, -1.0, 2.0]).unwrap();
        let data = Dataset::new(vec![LabeledPoint { x, y: Label::One }]).unwrap();
        let m = fit_plugin(&data, 2).unwrap();
        assert_eq!(m.theta_hat.as_slice(), &[0.5, -1.0]);
        assert_eq!(m.mu_hat.as_slice(), &[0.0, 0.0]);
        assert_eq!((m.n0, m.n1), (0, 1));
        assert!(fit_plugin(&Dataset::new(vec![]).unwrap(), 1).is_err());
        assert!(fit_plugin(&data, 4).is_err());
    }

    #[test]
    fn noiseless_data_recovers_projected_drifts() {
        let spec = SobolevSpec::new(1.0, 1.0).unwrap();
        let pair = make_pair_with_separation(spec, 0.7, 20, 5).unwrap();
        let data = sample_dataset_with_noise(&pair, 64, 0.0, 2).unwrap();
        let m = fit_plugin(&data, 6).unwrap();
        let f6 = project(pair.f(), 6).unwrap().truncate(6).unwrap();
        let g6 = pair.g().truncate(6).unwrap();
        for (est, truth) in [(&m.theta_hat, &f6), (&m.mu_hat, &g6)] {
            assert!(est.sub(truth).norm() < 1e-13, "{est:?} vs {truth:?}");
        }
    }

    #[test]
    fn classify_and_eta_examples() {
        let m = model(vec![1.0, 0.0], vec![0.0, 1.0]);
        let x = |v: &[f64]| CoefVec::new(v.to_vec()).unwrap();
        assert_eq!(plugin_classify(&m, &x(&[1.0, 0.0])).unwrap(), Label::One);
        assert_eq!(plugin_classify(&m, &x(&[0.0, 1.0])).unwrap(), Label::Zero);
        // equidistant goes to 1
        assert_eq!(plugin_classify(&m, &x(&[0.5, 0.5])).unwrap(), Label::One);
        assert_eq!(plugin_classify(&m, &x(&[3.0, 3.0, 9.0])).unwrap(), Label::One);
        assert_eq!(eta_hat(&m, &x(&[0.5, 0.5])).unwrap(), 0.5);
        assert!(plugin_classify(&m, &x(&[1.0])).is_err());
        let same = model(vec![0.2, -0.4], vec![0.2, -0.4]);
        for v in [[0.0, 0.0], [7.0, -3.0]] {
            assert_eq!(eta_hat(&same, &x(&v)).unwrap(), 0.5);
        }
        // η̂ agrees with the explicit affine form
        let m = model(vec![0.3, -0.1], vec![-0.2, 0.4]);
        let p = x(&[0.7, 1.1]);
        let z = 0.5 * 0.7 - 0.5 * 1.1 - 0.5 * (0.09 + 0.01) + 0.5 * (0.04 + 0.16);
        assert!((eta_hat(&m, &p).unwrap() - crate::stats::logistic(z)).abs() < 1e-15);
    }

    #[test]
    fn dn_rule_examples() {
        let spec = SobolevSpec::new(1.0, 1.0).unwrap();
        assert_eq!(dn_rule(1000, spec), 10);
        assert_eq!(dn_rule(100, spec), 4);
        for s in [0.5, 1.0, 3.0] {
            assert_eq!(dn_rule(1, SobolevSpec::new(s, 1.0).unwrap()), 1);
        }
        assert_eq!(dn_rule(8192, spec), 20);
    }
}
