//! Estimate the probability that the regression function lands within `eps`
//! of one half and check it against the closed-form bounds.

use funclass::model::{make_pair_with_separation, SobolevSpec};
use funclass::risk::{margin_lower_bound, margin_prob, margin_upper_bound};

pub fn main() -> funclass::Result<()> {
    let spec = SobolevSpec::new(1.0, 3.0)?;
    for delta in [0.5, 1.0, 2.0] {
        let pair = make_pair_with_separation(spec, delta, 16, 1)?;
        for eps in [0.05, 0.1] {
            let p = margin_prob(&pair, eps, 200_000, 7)?;
            println!(
                "delta {delta:3.1} eps {eps:4.2}: {:.4} <= {:.4} ± {:.4} <= {:.4}",
                margin_lower_bound(delta, eps),
                p.mean,
                p.stderr,
                margin_upper_bound(delta, eps)
            );
        }
    }
    Ok(())
}
