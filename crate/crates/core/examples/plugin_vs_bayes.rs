//! Fit the projected plug-in rule at the truncation level `d_n` and compare
//! its Monte Carlo excess risk with the Bayes risk.

use funclass::classifiers::{dn_rule, fit_plugin, BayesRule};
use funclass::model::{make_pair_with_separation, sample_dataset, SobolevSpec};
use funclass::risk::{bayes_risk_exact, mc_excess_risk, mc_risk};

pub fn main() -> funclass::Result<()> {
    let spec = SobolevSpec::new(1.0, 2.0)?;
    let pair = make_pair_with_separation(spec, 1.0, 256, 0)?;
    println!("Bayes risk {:.5}", bayes_risk_exact(1.0));

    let bayes = mc_risk(&BayesRule::new(&pair), &pair, 20_000, 1)?;
    println!("Bayes rule by Monte Carlo {:.5} ± {:.5}", bayes.mean, bayes.stderr);

    for n in [50, 200, 800] {
        let d = dn_rule(n, spec);
        let model = fit_plugin(&sample_dataset(&pair, n, n as u64)?, d)?;
        let e = mc_excess_risk(&model, &pair, 20_000, 2)?;
        println!("n = {n:4}  d_n = {d:2}  excess {:.5} ± {:.5}", e.mean, e.stderr);
    }
    Ok(())
}
