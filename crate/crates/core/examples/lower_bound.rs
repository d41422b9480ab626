//! The pieces of the minimax lower bound: a hypercube packing, the
//! hypothesis set built on it, its angles and the Fano inequality.

use funclass::lowerbound::{
    angle_bounds_check, build_theta_set, fano_bound, kl_training, minimax_budget, packing_target, vg_packing,
    sobolev_admissibility,
};
use funclass::model::SobolevSpec;

pub fn main() -> funclass::Result<()> {
    let packing = vg_packing(16, 1)?;
    packing.verify()?;
    println!(
        "packing of {{-1,1}}^16: {} words (target {}), min distance {:?}",
        packing.len(),
        packing_target(16),
        packing.min_distance()
    );

    let set = build_theta_set(0.3, 0.1, 9, 0)?;
    let angles = angle_bounds_check(&set)?;
    println!(
        "{} hypotheses, angles in [{:.4}, {:.4}], bounds [{:.4}, {:.4}]",
        set.thetas.len(),
        angles.min_angle,
        angles.max_angle,
        angles.lower_bound,
        angles.upper_bound
    );

    let spec = SobolevSpec::new(1.0, 3.0)?;
    let check = sobolev_admissibility(&set, spec);
    println!("inside the Sobolev ball: {}", check.pass);

    // the bound on the chance of naming the right hypothesis is informative
    // only while it stays below one
    let n = 2;
    let base = set.thetas[0].as_slice();
    let avg_kl = set.thetas[1..]
        .iter()
        .map(|t| kl_training(t.as_slice(), base, n))
        .sum::<funclass::Result<f64>>()?
        / (set.thetas.len() - 1) as f64;
    println!("n = {n}: average KL {avg_kl:.4}, Fano bound {:.4}", fano_bound(avg_kl, set.thetas.len())?);

    for n in [100, 10_000] {
        let b = minimax_budget(n, spec, 0.5)?;
        println!("n = {n}: budget {:.5} ({:?} regime)", b.value, b.regime);
    }
    Ok(())
}
