//! Experiment runner behind the command-line subcommands. Every output is
//! a pure function of the configuration and the master seed.

pub mod csv;
pub mod svg;

use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::classifiers::{dn_rule, fit_plugin, plugin_split_select_d, BayesRule, Classifier};
use crate::config::{ClassifierKind, ExperimentConfig};
use crate::error::{Error, Result};
use crate::lowerbound::{
    angle_bounds_check, build_theta_set, cone_mass_mc, fano_bound_ln, l1_classifier_distance_mc, l1_lower_bound,
    packing_target, sobolev_admissibility, vg_packing, ConeSpec,
};
use crate::model::{make_pair_with_separation, sample_dataset, Label};
use crate::risk::{
    clamped, experiment_dim, experiment_pair, knn_compare, margin_lower_bound, margin_prob, margin_upper_bound,
    risk_curve, split_knn, static_d,
};
use crate::rng::{self, derive_seed};
use crate::trajectory::{path_to_coefvec, synthesize_path, Path, TimeGrid};

use self::csv::{LemmaRow, MarginRow, Table};
use self::svg::Series;

/// The available experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    RiskCurve,
    Margin,
    KnnCompare,
    Lowerbound,
    ClassifyPath,
    Simulate,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::RiskCurve,
        Subcommand::Margin,
        Subcommand::KnnCompare,
        Subcommand::Lowerbound,
        Subcommand::ClassifyPath,
        Subcommand::Simulate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::RiskCurve => "risk-curve",
            Subcommand::Margin => "margin",
            Subcommand::KnnCompare => "knn-compare",
            Subcommand::Lowerbound => "lowerbound",
            Subcommand::ClassifyPath => "classify-path",
            Subcommand::Simulate => "simulate",
        }
    }

    fn default_output(&self) -> String {
        match self {
            Subcommand::Simulate => "labels.csv".into(),
            other => format!("{}.csv", other.name()),
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown subcommand `{s}`")))
    }
}

/// Seed precedence: explicit flag, then the `FUNCLASS_SEED` value, then the
/// config's `master_seed`.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, cfg: &ExperimentConfig) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("FUNCLASS_SEED must be a u64, got `{v}`"))),
        None => Ok(cfg.master_seed),
    }
}

/// Runs `cmd` and writes its files into `out_dir` (created if missing).
/// Returns the written paths, main CSV first.
pub fn run(cmd: Subcommand, cfg: &ExperimentConfig, out_dir: &FsPath) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let main = out_dir.join(cfg.output_path.clone().unwrap_or_else(|| cmd.default_output()));
    let mut written = vec![main.clone()];
    let (table, plot) = match cmd {
        Subcommand::RiskCurve => {
            let result = risk_curve(cfg)?;
            let series = vec![Series {
                name: cfg.classifier.name().into(),
                points: result.rows.iter().map(|r| (r.n as f64, r.excess_mean)).collect(),
            }];
            (csv::risk_curve_csv(&result.rows), Some(series))
        }
        Subcommand::KnnCompare => {
            let rows = knn_compare(cfg)?;
            let series = ["plugin", "knn"]
                .iter()
                .map(|m| Series {
                    name: m.to_string(),
                    points: rows
                        .iter()
                        .filter(|r| r.method.name() == *m)
                        .map(|r| (r.n as f64, r.excess_mean))
                        .collect(),
                })
                .collect();
            (csv::knn_compare_csv(&rows), Some(series))
        }
        Subcommand::Margin => (csv::margin_csv(&margin_table(cfg)?), None),
        Subcommand::Lowerbound => (csv::lowerbound_csv(&lowerbound_report(cfg)?), None),
        Subcommand::ClassifyPath => {
            let file = cfg
                .path_file
                .as_ref()
                .ok_or_else(|| Error::invalid("classify-path needs `path_file` in the config"))?;
            (classify_path_csv(cfg, &Path::read_csv(file)?)?, None)
        }
        Subcommand::Simulate => {
            let (labels, paths) = simulate(cfg)?;
            for (name, text) in paths {
                let p = out_dir.join(name);
                fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
                written.push(p);
            }
            (labels, None)
        }
    };
    fs::write(&main, table).map_err(|e| Error::io(&main, e))?;
    if let (true, Some(series)) = (cfg.plot, plot) {
        let svg_path = main.with_extension("svg");
        let svg = svg::log_log_plot(cmd.name(), "n", "excess risk", &series);
        fs::write(&svg_path, svg).map_err(|e| Error::io(&svg_path, e))?;
        written.push(svg_path);
    }
    Ok(written)
}

/// Margin probabilities and both bounds for every `(Δ, ε)` cell.
pub fn margin_table(cfg: &ExperimentConfig) -> Result<Vec<MarginRow>> {
    let spec = cfg.spec()?;
    let dim = cfg.ambient_dim.unwrap_or(16);
    let cells: Vec<(usize, f64, f64)> = cfg
        .margin_deltas
        .iter()
        .flat_map(|&d| cfg.margin_eps.iter().map(move |&e| (d, e)))
        .enumerate()
        .map(|(i, (d, e))| (i, d, e))
        .collect();
    cells
        .par_iter()
        .map(|&(i, delta, eps)| {
            let pair = make_pair_with_separation(spec, delta, dim, cfg.master_seed)?;
            let est = margin_prob(&pair, eps, cfg.mc_inner, derive_seed(cfg.master_seed, &[4, i as u64]))?;
            Ok(MarginRow {
                delta,
                eps,
                prob: est.mean,
                stderr: est.stderr,
                upper_bound: margin_upper_bound(delta, eps),
                lower_bound: margin_lower_bound(delta, eps),
            })
        })
        .collect()
}

/// Verification report for the lower-bound construction with
/// `(lb_delta, lb_eps, lb_dim)`.
pub fn lowerbound_report(cfg: &ExperimentConfig) -> Result<Vec<LemmaRow>> {
    let seed = cfg.master_seed;
    let n_mc = cfg.lb_mc;
    let mut rows = Vec::new();

    let mut ms = vec![1, 8, 16, 32];
    if !ms.contains(&(cfg.lb_dim - 1)) && cfg.lb_dim >= 2 {
        ms.push(cfg.lb_dim - 1);
    }
    for m in ms {
        let p = vg_packing(m, derive_seed(seed, &[8, m as u64]))?;
        rows.push(LemmaRow {
            lemma: "vg_packing",
            params: format!("m={m};min_hamming={}", p.min_distance().unwrap_or(0)),
            bound: packing_target(m) as f64,
            estimate: p.len() as f64,
            stderr: 0.0,
            pass: p.verify().is_ok(),
        });
    }

    let tset = build_theta_set(cfg.lb_delta, cfg.lb_eps, cfg.lb_dim, derive_seed(seed, &[9]))?;
    let params = format!("delta={};eps={};d={}", cfg.lb_delta, cfg.lb_eps, cfg.lb_dim);
    let angles = angle_bounds_check(&tset)?;
    rows.push(LemmaRow {
        lemma: "angle_lower",
        params: params.clone(),
        bound: angles.lower_bound,
        estimate: angles.min_angle,
        stderr: 0.0,
        pass: angles.min_angle >= angles.lower_bound - 1e-12,
    });
    rows.push(LemmaRow {
        lemma: "angle_upper",
        params: params.clone(),
        bound: angles.upper_bound,
        estimate: angles.max_angle,
        stderr: 0.0,
        pass: angles.max_angle <= angles.upper_bound + 1e-12,
    });
    let sob = sobolev_admissibility(&tset, cfg.spec()?);
    rows.push(LemmaRow {
        lemma: "sobolev_admissibility",
        params: format!("{params};s={};R={}", cfg.s, cfg.radius),
        bound: sob.rhs,
        estimate: sob.bound_lhs,
        stderr: 0.0,
        pass: sob.pass,
    });

    let cones = [([0.0, 0.0], std::f64::consts::FRAC_PI_2), ([0.0, 0.0], std::f64::consts::PI - 1e-3), ([3.0, 0.0], std::f64::consts::FRAC_PI_2)];
    for (i, (z, a)) in cones.into_iter().enumerate() {
        let cone = ConeSpec::from_angle(z, a)?;
        let est = cone_mass_mc(&cone, n_mc, derive_seed(seed, &[10, i as u64]))?;
        rows.push(LemmaRow {
            lemma: "cone_mass",
            params: format!("z1={};z2={};angle={}", z[0], z[1], crate::experiments::csv::num(a)),
            bound: cone.mass_lower_bound(),
            estimate: est.mean,
            stderr: est.stderr,
            pass: est.mean >= cone.mass_lower_bound() - 3.0 * est.stderr,
        });
    }

    // ε = c/√n with c² = 1/8 and d − 1 = 32: average KL (d−1)/32 against
    // ln N = (d−1)/8
    let fano = fano_bound_ln(1.0, 4.0)?;
    rows.push(LemmaRow {
        lemma: "fano",
        params: "c2=0.125;d_minus_1=32".into(),
        bound: 0.5,
        estimate: fano,
        stderr: 0.0,
        pass: fano <= 0.5,
    });

    let bound = l1_lower_bound(tset.d, tset.eps, tset.delta);
    let pairs: Vec<(usize, usize)> = (0..tset.thetas.len())
        .flat_map(|i| (i + 1..tset.thetas.len()).map(move |j| (i, j)))
        .collect();
    for (i, j) in pairs {
        let est = l1_classifier_distance_mc(
            tset.thetas[i].as_slice(),
            tset.thetas[j].as_slice(),
            n_mc,
            derive_seed(seed, &[11, i as u64, j as u64]),
        )?;
        rows.push(LemmaRow {
            lemma: "l1_distance",
            params: format!("{params};i={i};j={j}"),
            bound,
            estimate: est.mean,
            stderr: est.stderr,
            pass: est.mean >= bound - 3.0 * est.stderr,
        });
    }
    Ok(rows)
}

/// Labels and η estimates of one trajectory under each rule. The pair
/// and training sample are those of the largest `n` in the grid.
pub fn classify_path_csv(cfg: &ExperimentConfig, path: &Path) -> Result<String> {
    let dim = experiment_dim(cfg)?;
    let n = *cfg.n_grid.last().ok_or_else(|| Error::invalid("n_grid is empty"))?;
    let pair = experiment_pair(cfg, n, dim)?;
    let spec = pair.spec();
    let x = path_to_coefvec(path, dim)?;
    let x = x.as_slice();
    let data = sample_dataset(&pair, n, derive_seed(cfg.master_seed, &[7]))?;
    let split_seed = derive_seed(cfg.master_seed, &[7, 1]);
    let d_static = static_d(cfg.d_rule, n, spec, dim);
    let d_trunc = d_static.unwrap_or_else(|| dn_rule(n, spec).clamp(1, dim));

    let mut t = Table::new(csv::CLASSIFY_PATH_HEADER);
    let mut push = |method: &str, d: usize, label: Label, eta: f64| {
        t.push(&[method.into(), d.to_string(), label.to_string(), csv::num(eta)]);
    };
    let full = BayesRule::new(&pair);
    push(ClassifierKind::Bayes.name(), dim, full.classify(x), full.eta(x));
    let trunc = BayesRule::truncated(&pair, d_trunc)?;
    push(ClassifierKind::TruncatedBayes.name(), d_trunc, trunc.classify(x), trunc.eta(x));
    let d_plugin = match d_static {
        Some(d) => d,
        None => plugin_split_select_d(&data, &clamped(&cfg.d_candidates, dim), split_seed)?,
    };
    let plugin = fit_plugin(&data, d_plugin)?;
    let coefs = crate::model::CoefVec::new(x.to_vec())?;
    push(
        ClassifierKind::Plugin.name(),
        d_plugin,
        plugin.classify(x),
        crate::classifiers::eta_hat(&plugin, &coefs)?,
    );
    let knn = split_knn(&data, &cfg.d_candidates, cfg.k_rule, split_seed)?;
    push(ClassifierKind::Knn.name(), knn.d(), knn.classify(x), knn.vote_fraction(x)?);
    Ok(t.to_csv())
}

/// Synthesizes `paths` labeled trajectories of the pair at the first `n`
/// of the grid. Returns the label table and `(file name, CSV)` per path.
pub fn simulate(cfg: &ExperimentConfig) -> Result<(String, Vec<(String, String)>)> {
    let dim = experiment_dim(cfg)?;
    let n = *cfg.n_grid.first().ok_or_else(|| Error::invalid("n_grid is empty"))?;
    let pair = experiment_pair(cfg, n, dim)?;
    let grid = TimeGrid::new(cfg.grid_steps)?;
    let paths: Vec<(Label, String, String)> = (0..cfg.paths)
        .into_par_iter()
        .map(|i| {
            let label = Label::from_bool(rng::stream(cfg.master_seed, &[5, i as u64]).random::<bool>());
            let path = synthesize_path(&pair, label, grid, derive_seed(cfg.master_seed, &[6, i as u64]));
            (label, format!("path_{i}.csv"), path.to_csv())
        })
        .collect();
    let mut t = Table::new(csv::LABELS_HEADER);
    for (i, (label, name, _)) in paths.iter().enumerate() {
        t.push(&[i.to_string(), label.to_string(), name.clone()]);
    }
    Ok((t.to_csv(), paths.into_iter().map(|(_, n, c)| (n, c)).collect()))
}
