//! End-to-end acceptance checks. Runs every criterion in sequence, prints
//! one PASS/FAIL line each, and exits nonzero if any fails.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use funclass::classifiers::{
    bayes_classify, eta_full, eta_hat, fit_plugin, plugin_classify, truncated_bayes_classify, eta_d, BayesRule,
    Classifier,
};
use funclass::config::{ClassifierKind, DeltaPolicy, ExperimentConfig};
use funclass::lowerbound::{
    angle_bounds_check, build_theta_set, cone_mass_mc, fano_bound_ln, l1_classifier_distance_mc, l1_lower_bound,
    sobolev_admissibility, vg_packing, ConeSpec,
};
use funclass::model::{make_pair_with_separation, sample_dataset, CoefVec, Label, ModelPair, SobolevSpec};
use funclass::risk::{
    bayes_risk_exact, knn_compare, knn_floor_check, margin_lower_bound, margin_prob, margin_upper_bound, mc_risk,
    rate_fit, risk_curve, CompareMethod,
};
use funclass::rng;
use funclass::stats::{ks_one_sample, normal_cdf};
use funclass::trajectory::{path_to_coefvec, synthesize_path, TimeGrid};

struct Outcome {
    pass: bool,
    detail: String,
}

fn spec(s: f64, r: f64) -> SobolevSpec {
    SobolevSpec::new(s, r).unwrap()
}

fn gaussian_inputs(count: usize, dim: usize, scale: f64, seed: u64) -> Vec<CoefVec> {
    let mut g = rng::stream(seed, &[]);
    (0..count)
        .map(|_| {
            let v = (0..dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut g);
                    scale * z
                })
                .collect();
            CoefVec::new(v).unwrap()
        })
        .collect()
}

fn within_limit(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn c1_exact_identities() -> Outcome {
    let t = Instant::now();
    let pair = make_pair_with_separation(spec(1.0, 1.0), 0.8, 24, 3).unwrap();
    let data = sample_dataset(&pair, 300, 4).unwrap();
    let model = fit_plugin(&data, 6).unwrap();
    let xs = gaussian_inputs(100_000, 24, 1.0, 5);

    let plugin_mismatch = xs
        .par_iter()
        .filter(|x| (eta_hat(&model, x).unwrap() >= 0.5) != (plugin_classify(&model, x).unwrap() == Label::One))
        .count();
    let trunc_mismatch = xs
        .par_iter()
        .filter(|x| {
            truncated_bayes_classify(&pair, x, 24).unwrap() != bayes_classify(&pair, x).unwrap()
                || eta_d(&pair, x, 24).unwrap() != eta_full(&pair, x).unwrap()
        })
        .count();
    // linear form: ‖W − θ‖ ≤ ‖W‖ ⟺ ⟨θ, W⟩ ≥ ‖θ‖²/2, compared with the Bayes
    // rule of (θ, 0)
    let theta = CoefVec::new((1..=24).map(|j| 0.4 / j as f64).collect()).unwrap();
    let zero_pair = ModelPair::new(theta.clone(), CoefVec::zeros(24), spec(1.0, 100.0)).unwrap();
    let rule = BayesRule::new(&zero_pair);
    let linear_mismatch = xs
        .par_iter()
        .filter(|w| {
            let by_distance = w.sub(&theta).norm_sq() <= w.norm_sq();
            let by_form = theta.dot(w) >= theta.norm_sq() / 2.0;
            by_distance != by_form || by_form != (rule.classify(w.as_slice()) == Label::One)
        })
        .count();
    let packings_ok = [1, 8, 16, 32].iter().all(|&m| vg_packing(m, m as u64).and_then(|p| p.verify()).is_ok());
    let (fast, time) = within_limit(t.elapsed(), Duration::from_secs(1));
    Outcome {
        pass: plugin_mismatch == 0 && trunc_mismatch == 0 && linear_mismatch == 0 && packings_ok && fast,
        detail: format!(
            "plugin/eta disagreements {plugin_mismatch}, truncated-vs-full {trunc_mismatch}, \
             linear form {linear_mismatch} (of 1e5 each); packings m=1,8,16,32 valid: {packings_ok}; {time}"
        ),
    }
}

fn c2_analytic_oracles() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, delta) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let pair = make_pair_with_separation(spec(1.0, 1.0), delta, 16, 1).unwrap();
        let r = mc_risk(&BayesRule::new(&pair), &pair, 1_000_000, 100 + i as u64).unwrap();
        let exact = bayes_risk_exact(delta);
        let z = (r.mean - exact) / r.stderr;
        ok &= z.abs() < 3.0;
        parts.push(format!("risk(Δ={delta}) z={z:+.2}"));
    }
    for (i, a) in [PI / 2.0, 1.0, PI - 1e-3].into_iter().enumerate() {
        let cone = ConeSpec::from_angle([0.0, 0.0], a).unwrap();
        let m = cone_mass_mc(&cone, 1_000_000, 200 + i as u64).unwrap();
        let z = (m.mean - a / PI) / m.stderr;
        ok &= z.abs() < 3.0;
        parts.push(format!("cone(A={a:.4}) z={z:+.2}"));
    }
    // d − 1 = 32, c² = 1/8: average KL (d − 1)c²/4, ln N = (d − 1)/8
    let (m, c2) = (32.0, 0.125);
    let fano = fano_bound_ln(m * c2 / 4.0, m / 8.0).unwrap();
    let fano_ok = (fano - 0.42329).abs() < 5e-6 && fano <= 2.0 / 8.0 + 0.25;
    ok &= fano_ok;
    parts.push(format!("fano {fano:.5} <= 0.5"));
    let (fast, time) = within_limit(t.elapsed(), Duration::from_secs(60));
    Outcome {
        pass: ok && fast,
        detail: format!("{}; {time}", parts.join(", ")),
    }
}

fn c3_margin_sandwich() -> Outcome {
    let t = Instant::now();
    let mut worst_upper = f64::INFINITY;
    let mut worst_lower = f64::INFINITY;
    let mut ok = true;
    let mut cell = 0u64;
    for delta in [0.5, 1.0, 2.0, 4.0] {
        let pair = make_pair_with_separation(spec(1.0, 2.0), delta, 16, 7).unwrap();
        for eps in [0.02, 0.05, 0.1, 0.125] {
            let m = margin_prob(&pair, eps, 1_000_000, 300 + cell).unwrap();
            cell += 1;
            let up = margin_upper_bound(delta, eps) + 3.0 * m.stderr - m.mean;
            let lo = m.mean - (margin_lower_bound(delta, eps) - 3.0 * m.stderr);
            worst_upper = worst_upper.min(up);
            worst_lower = worst_lower.min(lo);
            ok &= up >= 0.0 && lo >= 0.0;
        }
    }
    let (fast, time) = within_limit(t.elapsed(), Duration::from_secs(120));
    Outcome {
        pass: ok && fast,
        detail: format!(
            "16 cells at 1e6 draws; smallest slack to upper bound {worst_upper:.4}, to lower bound {worst_lower:.4}; {time}"
        ),
    }
}

fn c4_rates() -> Outcome {
    let t = Instant::now();
    let grid: Vec<usize> = (8..=13).map(|e| 1usize << e).collect();
    let mut cfg = ExperimentConfig::new(1.0, 1.0, grid, ClassifierKind::Plugin);
    cfg.mc_outer = 64;
    cfg.master_seed = 2024;
    cfg.delta_policy = DeltaPolicy::Fixed(1.0);
    let fixed = rate_fit(&risk_curve(&cfg).unwrap()).unwrap();
    cfg.delta_policy = DeltaPolicy::Coupled;
    let coupled = rate_fit(&risk_curve(&cfg).unwrap()).unwrap();
    let fixed_ok = (-0.80..=-0.45).contains(&fixed.slope) && fixed.r_squared >= 0.9;
    let coupled_ok = (-0.50..=-0.20).contains(&coupled.slope);
    Outcome {
        pass: fixed_ok && coupled_ok,
        detail: format!(
            "fixed Δ=1 slope {:.3} (r² {:.3}) in [-0.80,-0.45]; coupled slope {:.3} (r² {:.3}) in [-0.50,-0.20]; {:.0}s",
            fixed.slope,
            fixed.r_squared,
            coupled.slope,
            coupled.r_squared,
            t.elapsed().as_secs_f64()
        ),
    }
}

fn c5_knn_inferiority() -> Outcome {
    let t = Instant::now();
    let mut cfg = ExperimentConfig::new(1.0, 1.0, vec![4096], ClassifierKind::Plugin);
    cfg.delta_policy = DeltaPolicy::Fixed(1.0);
    cfg.d_candidates = vec![1, 2, 4, 8, 16];
    cfg.mc_outer = 256;
    cfg.master_seed = 4096;
    let rows = knn_compare(&cfg).unwrap();
    let plugin = rows.iter().find(|r| r.method == CompareMethod::Plugin).unwrap();
    let knn = rows.iter().find(|r| r.method == CompareMethod::Knn).unwrap();
    let se = (plugin.excess_stderr.powi(2) + knn.excess_stderr.powi(2)).sqrt();
    let sigmas = (knn.excess_mean - plugin.excess_mean) / se;
    let order_ok = sigmas > 3.0;

    let pair = make_pair_with_separation(spec(1.0, 1.0), 1.0, 4, 4).unwrap();
    let floor = knn_floor_check(&pair, &[256, 512, 1024, 2048, 4096], 32, 20_000, 44).unwrap();
    let nonneg = floor.rows.iter().all(|r| r.excess >= -3.0 * r.stderr);
    let admissible = floor.rows.iter().filter(|r| r.admissible).count();
    let floor_ok = admissible >= 3
        && floor.floor_constant >= 0.2
        && floor.slope <= 1.5
        && floor.correlation > 0.0
        && nonneg;
    Outcome {
        pass: order_ok && floor_ok,
        detail: format!(
            "n=4096: plugin {:.5}±{:.5} (d={}) vs knn {:.5}±{:.5} (d̂={}, k={}), gap {sigmas:.2}σ; \
             floor C={:.3} over {admissible} admissible rows, slope {:.3}, corr {:.3}; {:.0}s",
            plugin.excess_mean,
            plugin.excess_stderr,
            plugin.d,
            knn.excess_mean,
            knn.excess_stderr,
            knn.d,
            knn.k,
            floor.floor_constant,
            floor.slope,
            floor.correlation,
            t.elapsed().as_secs_f64()
        ),
    }
}

fn c6_lower_bound_construction() -> Outcome {
    let t = Instant::now();
    let tset = build_theta_set(0.3, 0.1, 9, 9).unwrap();
    let angles = angle_bounds_check(&tset).unwrap();
    let bound = l1_lower_bound(9, 0.1, 0.3);
    let mut min_z = f64::INFINITY;
    let mut pairs = 0;
    for i in 0..tset.thetas.len() {
        for j in i + 1..tset.thetas.len() {
            let e = l1_classifier_distance_mc(
                tset.thetas[i].as_slice(),
                tset.thetas[j].as_slice(),
                1_000_000,
                rng::derive_seed(66, &[i as u64, j as u64]),
            )
            .unwrap();
            min_z = min_z.min((e.mean - bound) / e.stderr);
            pairs += 1;
        }
    }
    let sob = sobolev_admissibility(&tset, spec(1.0, 3.0));
    let (fast, time) = within_limit(t.elapsed(), Duration::from_secs(300));
    Outcome {
        pass: angles.pass && min_z >= -3.0 && sob.pass && fast,
        detail: format!(
            "|Θ|={} angles [{:.4}, {:.4}] within [{:.4}, π/2]; L1 over {pairs} pairs ≥ {bound:.4} (min margin {min_z:.1}σ); \
             Sobolev (s=1,R=3) {:.2} ≤ {:.2} and weighted {:.2} ≤ {:.2}; {time}",
            tset.thetas.len(),
            angles.min_angle,
            angles.max_angle,
            angles.lower_bound,
            sob.bound_lhs,
            sob.rhs,
            sob.weighted_max,
            sob.rhs
        ),
    }
}

fn c7_trajectory_consistency() -> Outcome {
    let t = Instant::now();
    let pair = make_pair_with_separation(spec(1.0, 1.0), 1.0, 16, 12).unwrap();
    let grid = TimeGrid::new(2048).unwrap();
    let coefs: Vec<CoefVec> = (0..10_000u64)
        .into_par_iter()
        .map(|i| path_to_coefvec(&synthesize_path(&pair, Label::One, grid, rng::derive_seed(77, &[i])), 8).unwrap())
        .collect();
    let mut worst: f64 = 0.0;
    for j in 1..=8 {
        let mean = pair.f().coef(j);
        let sample: Vec<f64> = coefs.iter().map(|c| c.coef(j)).collect();
        worst = worst.max(ks_one_sample(&sample, |x| normal_cdf(x - mean)));
    }
    let (fast, time) = within_limit(t.elapsed(), Duration::from_secs(300));
    Outcome {
        pass: worst < 0.03 && fast,
        detail: format!("max KS distance over j ≤ 8: {worst:.4} (< 0.03); {time}"),
    }
}

fn run_cli(sub: &str, config: &Path, out: &Path, workers: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_funclass"))
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--workers")
        .arg(workers.to_string())
        .arg("--seed")
        .arg("31")
        .env_remove("FUNCLASS_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&status.stderr).into_owned())
    }
}

fn read_dir_sorted(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (PathBuf::from(p.file_name().unwrap()), bytes)
        })
        .collect();
    files.sort();
    files
}

fn c8_determinism() -> Outcome {
    let t = Instant::now();
    let root = std::env::temp_dir().join(format!("funclass-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&root);
    std::fs::create_dir_all(&root).unwrap();
    let path_file = root.join("input_path.csv");
    let pair = make_pair_with_separation(spec(1.0, 3.0), 1.0, 256, 31).unwrap();
    synthesize_path(&pair, Label::One, TimeGrid::new(512).unwrap(), 5)
        .write_csv(&path_file)
        .unwrap();
    let config = root.join("config.txt");
    std::fs::write(
        &config,
        format!(
            "s = 1\nR = 3\nn_grid = 64, 128\nclassifier = knn\nd_rule = split\nmc_inner = 3000\nmc_outer = 4\n\
             d_candidates = 1,2,4\nlb_mc = 20000\ngrid_steps = 256\npaths = 3\nplot = true\npath_file = {}\n",
            path_file.display()
        ),
    )
    .unwrap();
    let mut failures = Vec::new();
    let subs = ["risk-curve", "margin", "knn-compare", "lowerbound", "classify-path", "simulate"];
    for sub in subs {
        let mut outputs = Vec::new();
        for (run, workers) in [(0, 1), (1, 1), (2, 8), (3, 8)] {
            let out = root.join(format!("{sub}-{run}"));
            match run_cli(sub, &config, &out, workers) {
                Ok(()) => outputs.push(read_dir_sorted(&out)),
                Err(e) => failures.push(format!("{sub} failed: {e}")),
            }
        }
        if outputs.len() == 4 && outputs.iter().any(|o| *o != outputs[0]) {
            failures.push(format!("{sub}: outputs differ"));
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "all {} subcommands byte-identical across 2 runs x workers {{1, 8}}; {:.1}s",
                subs.len(),
                t.elapsed().as_secs_f64()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 8] = [
        ("1 exact identities", c1_exact_identities),
        ("2 analytic oracles", c2_analytic_oracles),
        ("3 margin sandwich", c3_margin_sandwich),
        ("4 convergence rates", c4_rates),
        ("5 kNN inferiority and floor", c5_knn_inferiority),
        ("6 lower-bound construction", c6_lower_bound_construction),
        ("7 trajectory consistency", c7_trajectory_consistency),
        ("8 CLI determinism", c8_determinism),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
