//! Simulate a diffusion path, write it as CSV, read it back and recover its
//! leading coefficients with the Itô integral.

use funclass::model::{make_pair_with_separation, Label, SobolevSpec};
use funclass::trajectory::{path_to_coefvec, synthesize_path, Path, TimeGrid};

pub fn main() -> funclass::Result<()> {
    let pair = make_pair_with_separation(SobolevSpec::new(1.0, 2.0)?, 1.0, 32, 3)?;
    let grid = TimeGrid::new(4096)?;
    let path = synthesize_path(&pair, Label::One, grid, 17);

    let text = path.to_csv();
    println!("{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    let back = Path::from_csv(&text)?;
    assert_eq!(back.grid().steps(), grid.steps());

    let coefs = path_to_coefvec(&back, 4)?;
    for j in 1..=4 {
        println!(
            "coefficient {}: drift {:+.4}, recovered {:+.4}",
            j,
            pair.f().coef(j),
            coefs.coef(j)
        );
    }

    // each coefficient carries unit Gaussian noise; averaging paths removes it
    let reps = 400;
    let mut mean = [0.0; 4];
    for seed in 0..reps {
        let c = path_to_coefvec(&synthesize_path(&pair, Label::One, grid, seed), 4)?;
        for (m, j) in mean.iter_mut().zip(1..) {
            *m += c.coef(j) / reps as f64;
        }
    }
    println!("average over {reps} paths: {mean:+.3?}");
    Ok(())
}
