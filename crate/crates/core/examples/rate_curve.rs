//! Run a small risk-curve experiment from a config string and fit the
//! log-log slope of the excess risk.

use funclass::config::ExperimentConfig;
use funclass::experiments::csv::risk_curve_csv;
use funclass::risk::{rate_fit, risk_curve};

const CONFIG: &str = "
s = 1
R = 2
delta_policy = fixed:1
n_grid = 64, 128, 256, 512, 1024
classifier = plugin
mc_inner = 4000
mc_outer = 8
master_seed = 3
";

pub fn main() -> funclass::Result<()> {
    let cfg: ExperimentConfig = CONFIG.parse()?;
    let result = risk_curve(&cfg)?;
    print!("{}", risk_curve_csv(&result.rows));
    let fit = rate_fit(&result)?;
    println!("slope {:.3}, r^2 {:.3}", fit.slope, fit.r_squared);
    Ok(())
}
