//! Continuous-time trajectories `dX = drift(t) dt + dW(t)` on a uniform grid.
//!
//! Paths are synthesized with Euler–Maruyama and mapped back to coefficient
//! space through left-endpoint Itô sums against the trigonometric basis
//! `φ_1 = 1`, `φ_{2k} = √2 cos(2πkt)`, `φ_{2k+1} = √2 sin(2πkt)`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::path::Path as FsPath;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{CoefVec, Label, ModelPair};
use crate::rng;

/// Uniform grid `t_k = k / M`, `k = 0..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeGrid {
    steps: usize,
}

impl TimeGrid {
    pub fn new(steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::invalid(format!("time grid needs M >= 2 steps, got {steps}")));
        }
        Ok(TimeGrid { steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.steps as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 / self.steps as f64
    }
}

/// Discretized trajectory with `X(t_0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    values: Vec<f64>,
    grid: TimeGrid,
    pub label: Option<Label>,
}

impl Path {
    pub fn new(values: Vec<f64>, grid: TimeGrid, label: Option<Label>) -> Result<Self> {
        if values.len() != grid.steps + 1 {
            return Err(Error::DimensionMismatch {
                expected: grid.steps + 1,
                actual: values.len(),
            });
        }
        if values[0] != 0.0 {
            return Err(Error::invalid(format!("path must start at 0, got {}", values[0])));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("path contains non-finite values"));
        }
        Ok(Path { values, grid, label })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    /// Serializes as `t,x` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n");
        for (k, x) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.grid.t(k), x);
        }
        out
    }

    /// Parses the `t,x` CSV produced by [`Path::to_csv`]. The grid size is
    /// inferred from the row count and the time column must match it.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let line_of = |e: &csv::Error| e.position().map_or(1, |p| p.line() as usize);
        let header = reader.headers().map_err(|e| Error::Csv {
            line: line_of(&e),
            message: e.to_string(),
        })?;
        if header.iter().collect::<Vec<_>>() != ["t", "x"] {
            let found = header.iter().collect::<Vec<_>>().join(",");
            return Err(Error::Csv {
                line: 1,
                message: if found.is_empty() {
                    "empty file".into()
                } else {
                    format!("expected header `t,x`, found `{found}`")
                },
            });
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Csv {
                line: line_of(&e),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let bad = |message: String| Error::Csv { line, message };
            let t: f64 = record[0].parse().map_err(|e| bad(format!("bad t: {e}")))?;
            let x: f64 = record[1].parse().map_err(|e| bad(format!("bad x: {e}")))?;
            rows.push((line, t, x));
        }
        let grid = TimeGrid::new(rows.len().saturating_sub(1))?;
        for (k, &(line, t, _)) in rows.iter().enumerate() {
            if (t - grid.t(k)).abs() > 1e-9 {
                return Err(Error::Csv {
                    line,
                    message: format!("time {t} does not match grid point {}", grid.t(k)),
                });
            }
        }
        Path::new(rows.into_iter().map(|r| r.2).collect(), grid, None)
    }

    pub fn write_csv(&self, path: impl AsRef<FsPath>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: impl AsRef<FsPath>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Path::from_csv(&text)
    }
}

/// Trigonometric basis element `φ_j(t)`, `j ≥ 1`, `t ∈ [0, 1]`.
pub fn basis_eval(j: usize, t: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("basis index starts at 1"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("t = {t} outside [0, 1]")));
    }
    Ok(trig(j, t))
}

#[inline]
fn trig(j: usize, t: f64) -> f64 {
    if j == 1 {
        return 1.0;
    }
    let k = (j / 2) as f64;
    if j.is_multiple_of(2) {
        SQRT_2 * (2.0 * PI * k * t).cos()
    } else {
        SQRT_2 * (2.0 * PI * k * t).sin()
    }
}

/// Drift `Σ_j c_j φ_j(t)` evaluated at the left endpoints `t_0..t_{M-1}`.
pub fn drift_on_grid(coefs: &CoefVec, grid: TimeGrid) -> Vec<f64> {
    let nz: Vec<(usize, f64)> = coefs
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(i, &c)| (i + 1, c))
        .collect();
    (0..grid.steps)
        .map(|k| {
            let t = grid.t(k);
            nz.iter().map(|&(j, c)| c * trig(j, t)).sum()
        })
        .collect()
}

/// Euler–Maruyama synthesizer for one class of a [`ModelPair`]; the drift
/// on the grid is computed once and reused for every path.
#[derive(Debug, Clone)]
pub struct PathSynthesizer {
    drift: Vec<f64>,
    grid: TimeGrid,
    label: Label,
    noise_scale: f64,
}

impl PathSynthesizer {
    pub fn new(pair: &ModelPair, label: Label, grid: TimeGrid) -> Self {
        PathSynthesizer {
            drift: drift_on_grid(pair.drift(label), grid),
            grid,
            label,
            noise_scale: 1.0,
        }
    }

    /// Multiplies the Brownian increments by `scale` (0 gives the noiseless
    /// Euler scheme).
    pub fn with_noise_scale(mut self, scale: f64) -> Self {
        self.noise_scale = scale;
        self
    }

    pub fn path(&self, seed: u64) -> Path {
        let mut rng = rng::stream(seed, &[0x7A7A]);
        let dt = self.grid.dt();
        let sd = dt.sqrt() * self.noise_scale;
        let mut values = Vec::with_capacity(self.grid.steps + 1);
        let mut x = 0.0;
        values.push(x);
        for &mu in &self.drift {
            let z: f64 = StandardNormal.sample(&mut rng);
            x += mu * dt + sd * z;
            values.push(x);
        }
        Path {
            values,
            grid: self.grid,
            label: Some(self.label),
        }
    }
}

/// Synthesizes one trajectory of the given class.
pub fn synthesize_path(pair: &ModelPair, label: Label, grid: TimeGrid, seed: u64) -> Path {
    PathSynthesizer::new(pair, label, grid).path(seed)
}

/// Left-endpoint Itô sum `Σ_k φ_j(t_k) (X(t_{k+1}) − X(t_k))`.
pub fn ito_coefficient(path: &Path, j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("basis index starts at 1"));
    }
    if j == 1 {
        // telescopes exactly
        return Ok(path.values[path.grid.steps] - path.values[0]);
    }
    Ok(path
        .values
        .windows(2)
        .enumerate()
        .map(|(k, w)| trig(j, path.grid.t(k)) * (w[1] - w[0]))
        .sum())
}

/// `(⟨φ_1, X⟩, …, ⟨φ_d, X⟩)` as a coefficient vector.
pub fn path_to_coefvec(path: &Path, d: usize) -> Result<CoefVec> {
    if d == 0 {
        return Err(Error::invalid("d must be >= 1"));
    }
    let coeffs = (1..=d).map(|j| ito_coefficient(path, j)).collect::<Result<Vec<_>>>()?;
    CoefVec::new(coeffs)
}
