//! kNN on the projected sequence: the admissible choices of `k` and the cost
//! of raising the projection dimension.

use funclass::classifiers::{max_admissible_k, optimal_k, KnnModel};
use funclass::model::{make_pair_with_separation, sample_dataset, SobolevSpec};
use funclass::risk::mc_excess_risk;

pub fn main() -> funclass::Result<()> {
    for d in [1, 2, 4, 8] {
        let n = 4096;
        println!(
            "d = {d}: optimal k {}, largest admissible k {:?}",
            optimal_k(n, d),
            max_admissible_k(n, d)
        );
    }

    let pair = make_pair_with_separation(SobolevSpec::new(1.0, 2.0)?, 1.0, 64, 0)?;
    let data = sample_dataset(&pair, 1000, 9)?;
    for d in [1, 4, 16] {
        let k = optimal_k(data.len(), d);
        let model = KnnModel::fit(&data, d, k)?;
        let e = mc_excess_risk(&model, &pair, 4000, 3)?;
        println!("n = 1000, d = {d:2}, k = {k:3}: excess {:.4} ± {:.4}", e.mean, e.stderr);
    }
    Ok(())
}
