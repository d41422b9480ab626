//! Draw a labelled sample from the Gaussian sequence model and look at the
//! Bayes rule on it.

use funclass::classifiers::{bayes_classify, eta_full};
use funclass::model::{make_pair_with_separation, sample_dataset, separation, sobolev_norm, Label, SobolevSpec};
use funclass::risk::bayes_risk_exact;

pub fn main() -> funclass::Result<()> {
    let spec = SobolevSpec::new(1.0, 2.0)?;
    let pair = make_pair_with_separation(spec, 1.0, 64, 11)?;
    println!(
        "f, g on the sphere: {:.6} {:.6}  (R^2 = 4)",
        sobolev_norm(pair.f(), spec.s()),
        sobolev_norm(pair.g(), spec.s())
    );
    println!("separation {:.3}", separation(&pair, None)?);

    let data = sample_dataset(&pair, 2000, 5)?;
    let (zeros, ones) = data.counts();
    println!("drew {} points: {zeros} zeros, {ones} ones", data.len());

    let errors = data
        .points()
        .iter()
        .filter(|p| bayes_classify(&pair, &p.x).map(|l| l != p.y).unwrap_or(true))
        .count();
    println!(
        "Bayes rule error on the sample {:.4}, exact Bayes risk {:.4}",
        errors as f64 / data.len() as f64,
        bayes_risk_exact(1.0)
    );

    let first = &data.points()[0];
    println!(
        "first point: label {}, eta {:.3}",
        first.y.as_u8(),
        eta_full(&pair, &first.x)?
    );
    assert!(matches!(first.y, Label::Zero | Label::One));
    Ok(())
}
