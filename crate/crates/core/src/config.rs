//! Plain-text experiment configuration: one `key = value` per line, `#`
//! starts a comment.
//!
//! | key            | values                                       | default                |
//! |----------------|----------------------------------------------|------------------------|
//! | `s`            | smoothness, > 0                              | required               |
//! | `R`            | Sobolev radius, > 0                          | required               |
//! | `n_grid`       | strictly increasing integers                 | required               |
//! | `classifier`   | `plugin`, `knn`, `truncated_bayes`, `bayes`  | required               |
//! | `delta_policy` | `fixed:<x>` or `coupled`                     | `fixed:1`              |
//! | `d_rule`       | `theorem1`, `fixed:<d>`, `split`             | `theorem1`             |
//! | `k_rule`       | `optimal`, `fixed:<k>`                       | `optimal`              |
//! | `mc_inner`     | test draws per replicate, ≥ 1                | `20000`                |
//! | `mc_outer`     | training replicates, ≥ 1                     | `64`                   |
//! | `master_seed`  | u64                                          | `0`                    |
//! | `ambient_D`    | `auto` or integer ≥ 1                        | `auto` (max(256, 4·d)) |
//! | `output_path`  | file name inside the output directory        | `<subcommand>.csv`     |
//! | `d_candidates` | truncation levels tried by `split`           | `1,2,4,8,16`           |
//! | `margin_deltas`| separations for `margin`                     | `0.5,1,2,4`            |
//! | `margin_eps`   | margin widths for `margin`                   | `0.02,0.05,0.1,0.125`  |
//! | `lb_delta`     | Δ of the lower-bound hypothesis set          | `0.3`                  |
//! | `lb_eps`       | ε of the lower-bound hypothesis set          | `0.1`                  |
//! | `lb_dim`       | dimension of the lower-bound hypothesis set  | `9`                    |
//! | `lb_mc`        | Monte Carlo draws per lower-bound check      | `1000000`              |
//! | `grid_steps`   | time steps for trajectory subcommands, ≥ 2   | `2048`                 |
//! | `paths`        | number of paths written by `simulate`        | `4`                    |
//! | `path_file`    | trajectory CSV read by `classify-path`       | none                   |
//! | `plot`         | `true` / `false`: also write an SVG plot     | `false`                |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::SobolevSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaPolicy {
    Fixed(f64),
    /// `Δ_n = R^{1/(2s+1)} n^{-s/(2s+1)}`, the boundary between the two rate
    /// regimes.
    Coupled,
}

impl DeltaPolicy {
    pub fn delta(&self, n: usize, spec: SobolevSpec) -> f64 {
        match *self {
            DeltaPolicy::Fixed(d) => d,
            DeltaPolicy::Coupled => coupled_delta(n, spec),
        }
    }
}

/// `R^{1/(2s+1)} n^{-s/(2s+1)}`.
pub fn coupled_delta(n: usize, spec: SobolevSpec) -> f64 {
    let e = 2.0 * spec.s() + 1.0;
    spec.radius().powf(1.0 / e) * (n as f64).powf(-spec.s() / e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Plugin,
    Knn,
    TruncatedBayes,
    Bayes,
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Plugin => "plugin",
            ClassifierKind::Knn => "knn",
            ClassifierKind::TruncatedBayes => "truncated_bayes",
            ClassifierKind::Bayes => "bayes",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DRule {
    /// `d_n = ⌊(R²n)^{1/(2s+1)}⌋`, spelled `theorem1` in config files.
    Dn,
    Fixed(usize),
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KRule {
    Optimal,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub s: f64,
    pub radius: f64,
    pub delta_policy: DeltaPolicy,
    pub n_grid: Vec<usize>,
    pub classifier: ClassifierKind,
    pub d_rule: DRule,
    pub k_rule: KRule,
    pub mc_inner: usize,
    pub mc_outer: usize,
    pub master_seed: u64,
    pub ambient_dim: Option<usize>,
    pub output_path: Option<String>,
    pub d_candidates: Vec<usize>,
    pub margin_deltas: Vec<f64>,
    pub margin_eps: Vec<f64>,
    pub lb_delta: f64,
    pub lb_eps: f64,
    pub lb_dim: usize,
    pub lb_mc: usize,
    pub grid_steps: usize,
    pub paths: usize,
    pub path_file: Option<String>,
    pub plot: bool,
}

impl ExperimentConfig {
    /// Config with every optional key at its default.
    pub fn new(s: f64, radius: f64, n_grid: Vec<usize>, classifier: ClassifierKind) -> Self {
        ExperimentConfig {
            s,
            radius,
            delta_policy: DeltaPolicy::Fixed(1.0),
            n_grid,
            classifier,
            d_rule: DRule::Dn,
            k_rule: KRule::Optimal,
            mc_inner: 20_000,
            mc_outer: 64,
            master_seed: 0,
            ambient_dim: None,
            output_path: None,
            d_candidates: vec![1, 2, 4, 8, 16],
            margin_deltas: vec![0.5, 1.0, 2.0, 4.0],
            margin_eps: vec![0.02, 0.05, 0.1, 0.125],
            lb_delta: 0.3,
            lb_eps: 0.1,
            lb_dim: 9,
            lb_mc: 1_000_000,
            grid_steps: 2048,
            paths: 4,
            path_file: None,
            plot: false,
        }
    }

    pub fn spec(&self) -> Result<SobolevSpec> {
        SobolevSpec::new(self.s, self.radius)
    }

    /// Parses and validates a configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new(0.0, 0.0, Vec::new(), ClassifierKind::Plugin);
        let mut seen: Vec<&'static str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| err(format!("{key}: invalid {what} `{value}`"));
            let canonical = KEYS
                .iter()
                .copied()
                .find(|k| *k == key)
                .ok_or_else(|| err(format!("unknown key `{key}`")))?;
            if seen.contains(&canonical) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(canonical);
            match canonical {
                "s" => cfg.s = parse_positive(value).ok_or_else(|| bad("positive number"))?,
                "R" => cfg.radius = parse_positive(value).ok_or_else(|| bad("positive number"))?,
                "delta_policy" => {
                    cfg.delta_policy = match value {
                        "coupled" => DeltaPolicy::Coupled,
                        v => match v.strip_prefix("fixed:").and_then(|x| x.trim().parse::<f64>().ok()) {
                            Some(x) if x >= 0.0 && x.is_finite() => DeltaPolicy::Fixed(x),
                            _ => return Err(bad("delta policy (fixed:<x> | coupled)")),
                        },
                    }
                }
                "n_grid" => {
                    let grid: Vec<usize> = parse_list(value).ok_or_else(|| bad("integer list"))?;
                    if grid.is_empty() || grid[0] == 0 {
                        return Err(bad("n_grid (entries must be >= 1)"));
                    }
                    if grid.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(err(format!("n_grid: not strictly increasing `{value}`")));
                    }
                    cfg.n_grid = grid;
                }
                "classifier" => {
                    cfg.classifier = value.parse().map_err(|_| bad("classifier (plugin | knn | truncated_bayes | bayes)"))?
                }
                "d_rule" => {
                    cfg.d_rule = match value {
                        "theorem1" => DRule::Dn,
                        "split" => DRule::Split,
                        v => match v.strip_prefix("fixed:").and_then(|x| x.trim().parse::<usize>().ok()) {
                            Some(d) if d >= 1 => DRule::Fixed(d),
                            _ => return Err(bad("d rule (theorem1 | fixed:<d> | split)")),
                        },
                    }
                }
                "k_rule" => {
                    cfg.k_rule = match value {
                        "optimal" => KRule::Optimal,
                        v => match v.strip_prefix("fixed:").and_then(|x| x.trim().parse::<usize>().ok()) {
                            Some(k) if k >= 1 => KRule::Fixed(k),
                            _ => return Err(bad("k rule (optimal | fixed:<k>)")),
                        },
                    }
                }
                "mc_inner" => cfg.mc_inner = parse_count(value).ok_or_else(|| bad("count >= 1"))?,
                "mc_outer" => cfg.mc_outer = parse_count(value).ok_or_else(|| bad("count >= 1"))?,
                "master_seed" => cfg.master_seed = value.parse().map_err(|_| bad("u64 seed"))?,
                "ambient_D" => {
                    cfg.ambient_dim = match value {
                        "auto" => None,
                        v => Some(parse_count(v).ok_or_else(|| bad("dimension (auto | integer >= 1)"))?),
                    }
                }
                "output_path" => cfg.output_path = Some(value.to_string()),
                "d_candidates" => {
                    let c: Vec<usize> = parse_list(value).ok_or_else(|| bad("integer list"))?;
                    if c.is_empty() || c.contains(&0) {
                        return Err(bad("d_candidates (entries must be >= 1)"));
                    }
                    cfg.d_candidates = c;
                }
                "margin_deltas" => {
                    let v: Vec<f64> = parse_list(value).ok_or_else(|| bad("number list"))?;
                    if v.is_empty() || v.iter().any(|x| !(*x > 0.0)) {
                        return Err(bad("margin_deltas (entries must be > 0)"));
                    }
                    cfg.margin_deltas = v;
                }
                "margin_eps" => {
                    let v: Vec<f64> = parse_list(value).ok_or_else(|| bad("number list"))?;
                    if v.is_empty() || v.iter().any(|x| !(*x > 0.0)) {
                        return Err(bad("margin_eps (entries must be > 0)"));
                    }
                    cfg.margin_eps = v;
                }
                "lb_delta" => cfg.lb_delta = parse_positive(value).ok_or_else(|| bad("positive number"))?,
                "lb_eps" => cfg.lb_eps = parse_positive(value).ok_or_else(|| bad("positive number"))?,
                "lb_dim" => cfg.lb_dim = parse_count(value).ok_or_else(|| bad("dimension"))?,
                "lb_mc" => cfg.lb_mc = parse_count(value).ok_or_else(|| bad("count >= 1"))?,
                "grid_steps" => match parse_count(value) {
                    Some(m) if m >= 2 => cfg.grid_steps = m,
                    _ => return Err(bad("grid_steps (integer >= 2)")),
                },
                "paths" => cfg.paths = parse_count(value).ok_or_else(|| bad("count >= 1"))?,
                "path_file" => cfg.path_file = Some(value.to_string()),
                "plot" => cfg.plot = value.parse().map_err(|_| bad("boolean"))?,
                _ => unreachable!("all keys handled"),
            }
        }
        for required in ["s", "R", "n_grid", "classifier"] {
            if !seen.contains(&required) {
                return Err(Error::Config {
                    line: 0,
                    message: format!("missing required key `{required}`"),
                });
            }
        }
        Ok(cfg)
    }

    /// Canonical text form; `parse(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let flist = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("s", self.s.to_string());
        kv("R", self.radius.to_string());
        kv(
            "delta_policy",
            match self.delta_policy {
                DeltaPolicy::Fixed(x) => format!("fixed:{x}"),
                DeltaPolicy::Coupled => "coupled".into(),
            },
        );
        kv("n_grid", list(&self.n_grid));
        kv("classifier", self.classifier.name().into());
        kv(
            "d_rule",
            match self.d_rule {
                DRule::Dn => "theorem1".into(),
                DRule::Fixed(d) => format!("fixed:{d}"),
                DRule::Split => "split".into(),
            },
        );
        kv(
            "k_rule",
            match self.k_rule {
                KRule::Optimal => "optimal".into(),
                KRule::Fixed(k) => format!("fixed:{k}"),
            },
        );
        kv("mc_inner", self.mc_inner.to_string());
        kv("mc_outer", self.mc_outer.to_string());
        kv("master_seed", self.master_seed.to_string());
        kv("ambient_D", self.ambient_dim.map_or("auto".into(), |d| d.to_string()));
        if let Some(p) = &self.output_path {
            kv("output_path", p.clone());
        }
        kv("d_candidates", list(&self.d_candidates));
        kv("margin_deltas", flist(&self.margin_deltas));
        kv("margin_eps", flist(&self.margin_eps));
        kv("lb_delta", self.lb_delta.to_string());
        kv("lb_eps", self.lb_eps.to_string());
        kv("lb_dim", self.lb_dim.to_string());
        kv("lb_mc", self.lb_mc.to_string());
        kv("grid_steps", self.grid_steps.to_string());
        kv("paths", self.paths.to_string());
        if let Some(p) = &self.path_file {
            kv("path_file", p.clone());
        }
        kv("plot", self.plot.to_string());
        out
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentConfig::parse(s)
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plugin" => Ok(ClassifierKind::Plugin),
            "knn" => Ok(ClassifierKind::Knn),
            "truncated_bayes" => Ok(ClassifierKind::TruncatedBayes),
            "bayes" => Ok(ClassifierKind::Bayes),
            other => Err(Error::invalid(format!("unknown classifier `{other}`"))),
        }
    }
}

const KEYS: &[&str] = &[
    "s",
    "R",
    "delta_policy",
    "n_grid",
    "classifier",
    "d_rule",
    "k_rule",
    "mc_inner",
    "mc_outer",
    "master_seed",
    "ambient_D",
    "output_path",
    "d_candidates",
    "margin_deltas",
    "margin_eps",
    "lb_delta",
    "lb_eps",
    "lb_dim",
    "lb_mc",
    "grid_steps",
    "paths",
    "path_file",
    "plot",
];

fn parse_positive(v: &str) -> Option<f64> {
    v.parse::<f64>().ok().filter(|x| *x > 0.0 && x.is_finite())
}

fn parse_count(v: &str) -> Option<usize> {
    v.parse::<usize>().ok().filter(|x| *x >= 1)
}

fn parse_list<T: FromStr>(v: &str) -> Option<Vec<T>> {
    v.split(',').map(|x| x.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "s = 1\nR = 1\nn_grid = 256, 512,1024\nclassifier = plugin\n";

    #[test]
    fn minimal_config_gets_defaults_and_round_trips() {
        let cfg = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.n_grid, vec![256, 512, 1024]);
        assert_eq!(cfg.mc_outer, 64);
        assert_eq!(cfg.mc_inner, 20_000);
        assert_eq!(cfg.d_rule, DRule::Dn);
        assert_eq!(cfg.ambient_dim, None);
        let again = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn full_config_round_trips() {
        let text = "# rate run\ns = 1.5\nR = 2   # radius\ndelta_policy = coupled\nn_grid = 10,20\n\
                    classifier = knn\nd_rule = split\nk_rule = fixed:3\nmc_inner = 5\nmc_outer = 2\n\
                    master_seed = 99\nambient_D = 64\noutput_path = out.csv\nd_candidates = 1,3\n\
                    margin_deltas = 0.5,2\nmargin_eps = 0.1\nlb_delta = 0.4\nlb_eps = 0.05\nlb_dim = 11\n\
                    lb_mc = 1000\ngrid_steps = 64\npaths = 2\npath_file = p.csv\nplot = true\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.delta_policy, DeltaPolicy::Coupled);
        assert_eq!(cfg.k_rule, KRule::Fixed(3));
        assert_eq!(cfg.ambient_dim, Some(64));
        assert!(cfg.plot);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    fn err_of(text: &str) -> (usize, String) {
        match ExperimentConfig::parse(text) {
            Err(Error::Config { line, message }) => (line, message),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_enum_is_named() {
        let (line, msg) = err_of("s = 1\nR = 1\nn_grid = 4\nclassifier = svm\n");
        assert_eq!(line, 4);
        assert!(msg.contains("classifier") && msg.contains("svm"), "{msg}");
    }

    #[test]
    fn decreasing_grid_is_rejected() {
        let (line, msg) = err_of("s = 1\nR = 1\nn_grid = 256,128\nclassifier = bayes\n");
        assert_eq!(line, 3);
        assert!(msg.contains("not strictly increasing"), "{msg}");
    }

    #[test]
    fn unknown_missing_and_malformed() {
        let (line, msg) = err_of("s = 1\nfoo = 2\n");
        assert_eq!(line, 2);
        assert!(msg.contains("foo"));
        let (_, msg) = err_of("s = 1\nR = 1\nn_grid = 4\n");
        assert!(msg.contains("classifier"));
        let (line, _) = err_of("s = 1\nR = -1\n");
        assert_eq!(line, 2);
        let (line, _) = err_of("s = 1\njust text\n");
        assert_eq!(line, 2);
        let (line, _) = err_of("s = 1\ns = 2\n");
        assert_eq!(line, 2);
        let (line, _) = err_of("s = 1\nR = 1\nn_grid = 4\nclassifier = knn\nmc_outer = 0\n");
        assert_eq!(line, 5);
    }

    #[test]
    fn coupled_delta_value() {
        let spec = SobolevSpec::new(1.0, 1.0).unwrap();
        assert!((coupled_delta(1000, spec) - 0.1).abs() < 1e-12);
        assert_eq!(DeltaPolicy::Fixed(0.5).delta(1000, spec), 0.5);
    }
}
