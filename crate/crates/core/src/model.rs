//! Gaussian sequence representation of the white-noise classification model.
//!
//! A drift function is represented by its first `D` coefficients in a fixed
//! orthonormal basis. An observation `X` of class `y` becomes the vector
//! `X̃_j = c_j(drift_y) + ξ_j` with independent standard normal `ξ_j`, where the
//! class-1 drift is `f` and the class-0 drift is `g`.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Label::One
        } else {
            Label::Zero
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Zero => Label::One,
            Label::One => Label::Zero,
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(Error::invalid(format!("label must be 0 or 1, got {other}"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Finite sequence of basis coefficients `c_1, ..., c_D`.
///
/// Coordinates are 1-based in the mathematical sense; [`CoefVec::coef`] takes
/// a 1-based index while [`CoefVec::as_slice`] exposes the raw 0-based storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefVec(Vec<f64>);

impl CoefVec {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coefficient vector must have D >= 1"));
        }
        if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("coefficient {} is not finite", j + 1)));
        }
        Ok(CoefVec(coeffs))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        CoefVec(vec![0.0; dim])
    }

    /// `e_j` in dimension `dim` (1-based `j`).
    pub fn unit(dim: usize, j: usize) -> Self {
        assert!((1..=dim).contains(&j), "unit index out of range");
        let mut v = vec![0.0; dim];
        v[j - 1] = 1.0;
        CoefVec(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// 1-based coefficient access.
    pub fn coef(&self, j: usize) -> f64 {
        self.0[j - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &CoefVec) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn scaled(&self, a: f64) -> CoefVec {
        CoefVec(self.0.iter().map(|c| a * c).collect())
    }

    pub fn sub(&self, other: &CoefVec) -> CoefVec {
        assert_eq!(self.dim(), other.dim());
        CoefVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &CoefVec) -> CoefVec {
        assert_eq!(self.dim(), other.dim());
        CoefVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// First `d` coordinates as a `d`-dimensional vector.
    pub fn truncate(&self, d: usize) -> Result<CoefVec> {
        check_trunc(d, self.dim())?;
        Ok(CoefVec(self.0[..d].to_vec()))
    }
}

impl From<CoefVec> for Vec<f64> {
    fn from(v: CoefVec) -> Self {
        v.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn check_trunc(d: usize, dim: usize) -> Result<()> {
    if d == 0 || d > dim {
        Err(Error::invalid(format!(
            "truncation d = {d} outside 1..={dim}"
        )))
    } else {
        Ok(())
    }
}

/// Sobolev ball `{h : Σ c_j² j^{2s} ≤ R²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevSpec {
    s: f64,
    radius: f64,
}

impl SobolevSpec {
    pub fn new(s: f64, radius: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!("smoothness s must be > 0, got {s}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("radius R must be > 0, got {radius}")));
        }
        Ok(SobolevSpec { s, radius })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, h: &CoefVec) -> bool {
        sobolev_norm(h, self.s) <= self.radius * self.radius * (1.0 + 1e-9)
    }
}

/// `Σ_j c_j² j^{2s}`.
pub fn sobolev_norm(h: &CoefVec, s: f64) -> f64 {
    h.0.iter()
        .enumerate()
        .map(|(i, c)| c * c * ((i + 1) as f64).powf(2.0 * s))
        .sum()
}

/// Orthogonal projection onto the first `d` basis functions, kept in the
/// ambient dimension (coordinates beyond `d` are zeroed).
pub fn project(h: &CoefVec, d: usize) -> Result<CoefVec> {
    check_trunc(d, h.dim())?;
    let mut v = h.0.clone();
    v[d..].iter_mut().for_each(|c| *c = 0.0);
    Ok(CoefVec(v))
}

/// The two class drifts `f` (label 1) and `g` (label 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPair {
    f: CoefVec,
    g: CoefVec,
    spec: SobolevSpec,
}

impl ModelPair {
    /// Builds a pair, checking both drifts lie in the Sobolev ball.
    pub fn new(f: CoefVec, g: CoefVec, spec: SobolevSpec) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                actual: g.dim(),
            });
        }
        for (name, h) in [("f", &f), ("g", &g)] {
            if !spec.contains(h) {
                return Err(Error::invalid(format!(
                    "{name} has Sobolev norm {} > R² = {}",
                    sobolev_norm(h, spec.s),
                    spec.radius * spec.radius
                )));
            }
        }
        Ok(ModelPair { f, g, spec })
    }

    pub fn f(&self) -> &CoefVec {
        &self.f
    }

    pub fn g(&self) -> &CoefVec {
        &self.g
    }

    pub fn spec(&self) -> SobolevSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// Drift of the given class.
    pub fn drift(&self, label: Label) -> &CoefVec {
        match label {
            Label::One => &self.f,
            Label::Zero => &self.g,
        }
    }

    /// Pair with `f` and `g` exchanged.
    pub fn swapped(&self) -> ModelPair {
        ModelPair {
            f: self.g.clone(),
            g: self.f.clone(),
            spec: self.spec,
        }
    }

    /// Pair restricted to its first `d` coordinates (ambient dimension `d`).
    pub fn restrict(&self, d: usize) -> Result<ModelPair> {
        Ok(ModelPair {
            f: self.f.truncate(d)?,
            g: self.g.truncate(d)?,
            spec: self.spec,
        })
    }

    /// Pair with both drifts projected onto the first `d` coordinates.
    pub fn projected(&self, d: usize) -> Result<ModelPair> {
        Ok(ModelPair {
            f: project(&self.f, d)?,
            g: project(&self.g, d)?,
            spec: self.spec,
        })
    }
}

/// `‖f − g‖`, or `‖Π_d f − Π_d g‖` when `d` is given.
pub fn separation(pair: &ModelPair, d: Option<usize>) -> Result<f64> {
    let d = match d {
        Some(d) => {
            check_trunc(d, pair.dim())?;
            d
        }
        None => pair.dim(),
    };
    Ok(dist_sq(&pair.f.0[..d], &pair.g.0[..d]).sqrt())
}

/// Shapes used to generate points on the Sobolev sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// All mass on the first coefficient.
    Spike,
    /// `c_j ∝ j^{-(s+1)}`.
    PolyDecay,
    /// `c_j ∝ ±j^{-(s+1)}` with seeded random signs.
    RandomSigns,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spike" => Ok(Profile::Spike),
            "poly_decay" => Ok(Profile::PolyDecay),
            "random_signs" => Ok(Profile::RandomSigns),
            other => Err(Error::invalid(format!("unknown profile `{other}`"))),
        }
    }
}

/// Ambient dimension used when none is configured: `max(256, 4·d)`.
pub fn default_ambient_dim(d: usize) -> usize {
    256.max(4 * d)
}

fn rescale_to_sphere(mut v: Vec<f64>, s: f64, radius_sq: f64) -> Vec<f64> {
    let norm = sobolev_norm(&CoefVec(v.clone()), s);
    if norm > 0.0 {
        let a = (radius_sq / norm).sqrt();
        v.iter_mut().for_each(|c| *c *= a);
    }
    v
}

fn decay_shape(dim: usize, s: f64, first: usize, signs: Option<&mut ChaCha8Rng>) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|i| {
            if i + 1 < first {
                0.0
            } else {
                ((i + 1) as f64).powf(-(s + 1.0))
            }
        })
        .collect();
    if let Some(rng) = signs {
        for c in v.iter_mut() {
            if rng.random::<bool>() {
                *c = -*c;
            }
        }
    }
    v
}

/// A function on the boundary of the Sobolev ball: `sobolev_norm(h, s) = R²`.
pub fn make_boundary_function(
    spec: SobolevSpec,
    profile: Profile,
    dim: usize,
    seed: u64,
) -> Result<CoefVec> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let r2 = spec.radius * spec.radius;
    let v = match profile {
        Profile::Spike => {
            let mut v = vec![0.0; dim];
            v[0] = spec.radius;
            v
        }
        Profile::PolyDecay => rescale_to_sphere(decay_shape(dim, spec.s, 1, None), spec.s, r2),
        Profile::RandomSigns => {
            let mut rng = rng::stream(seed, &[0x5167]);
            rescale_to_sphere(decay_shape(dim, spec.s, 1, Some(&mut rng)), spec.s, r2)
        }
    };
    CoefVec::new(v)
}

/// A pair with `f − g = delta·e_1` and a shared filler in coordinates `j ≥ 2`
/// that puts both drifts on the Sobolev sphere.
pub fn make_pair_with_separation(
    spec: SobolevSpec,
    delta: f64,
    dim: usize,
    seed: u64,
) -> Result<ModelPair> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("separation must be >= 0, got {delta}")));
    }
    let max = 2.0 * spec.radius;
    if delta > max {
        return Err(Error::InfeasibleSeparation { delta, max });
    }
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let budget = (spec.radius * spec.radius - delta * delta / 4.0).max(0.0);
    let mut filler = if dim >= 2 && budget > 0.0 {
        let mut rng = rng::stream(seed, &[0xF111]);
        rescale_to_sphere(decay_shape(dim, spec.s, 2, Some(&mut rng)), spec.s, budget)
    } else {
        vec![0.0; dim]
    };
    let mut f = filler.clone();
    f[0] = delta / 2.0;
    filler[0] = -delta / 2.0;
    ModelPair::new(CoefVec(f), CoefVec(filler), spec)
}

/// One observation in coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: CoefVec,
    pub y: Label,
}

/// Record of the random stream a dataset was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeedInfo {
    pub seed: u64,
}

/// Training sample in coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<LabeledPoint>,
    pub seed_info: Option<SeedInfo>,
}

impl Dataset {
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.x.dim();
            if let Some(p) = points.iter().find(|p| p.x.dim() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: p.x.dim(),
                });
            }
        }
        Ok(Dataset {
            points,
            seed_info: None,
        })
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension (0 for an empty dataset).
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.x.dim())
    }

    /// `(N₀, N₁)`.
    pub fn counts(&self) -> (usize, usize) {
        let n1 = self.points.iter().filter(|p| p.y == Label::One).count();
        (self.points.len() - n1, n1)
    }

    /// Splits into the first `at` points and the rest.
    pub fn split_at(&self, at: usize) -> (Dataset, Dataset) {
        let (a, b) = self.points.split_at(at.min(self.points.len()));
        (
            Dataset {
                points: a.to_vec(),
                seed_info: self.seed_info,
            },
            Dataset {
                points: b.to_vec(),
                seed_info: self.seed_info,
            },
        )
    }

    /// Same points with every label flipped.
    pub fn relabeled(&self) -> Dataset {
        Dataset {
            points: self
                .points
                .iter()
                .map(|p| LabeledPoint {
                    x: p.x.clone(),
                    y: p.y.flip(),
                })
                .collect(),
            seed_info: self.seed_info,
        }
    }
}

/// Points per independently seeded block in [`sample_dataset`].
const POINTS_PER_BLOCK: usize = 256;

pub(crate) fn draw_point(pair: &ModelPair, noise_sd: f64, rng: &mut ChaCha8Rng) -> LabeledPoint {
    let y = Label::from_bool(rng.random::<bool>());
    let center = pair.drift(y).as_slice();
    let x = center
        .iter()
        .map(|&c| {
            let z: f64 = StandardNormal.sample(rng);
            c + noise_sd * z
        })
        .collect();
    LabeledPoint { x: CoefVec(x), y }
}

/// Streams mixture draws through a reusable buffer.
pub(crate) struct MixtureSampler<'a> {
    pair: &'a ModelPair,
    buf: Vec<f64>,
}

impl<'a> MixtureSampler<'a> {
    pub(crate) fn new(pair: &'a ModelPair) -> Self {
        MixtureSampler {
            pair,
            buf: vec![0.0; pair.dim()],
        }
    }

    /// Draws `(x, y)` with `y ~ Bernoulli(1/2)` and `x ~ N(drift_y, I)`.
    pub(crate) fn draw(&mut self, rng: &mut ChaCha8Rng) -> (&[f64], Label) {
        let y = Label::from_bool(rng.random::<bool>());
        for (b, &c) in self.buf.iter_mut().zip(self.pair.drift(y).as_slice()) {
            let z: f64 = StandardNormal.sample(rng);
            *b = c + z;
        }
        (&self.buf, y)
    }
}

/// Draws `n` i.i.d. labeled observations from the sequence model.
pub fn sample_dataset(pair: &ModelPair, n: usize, seed: u64) -> Result<Dataset> {
    sample_dataset_with_noise(pair, n, 1.0, seed)
}

/// As [`sample_dataset`] with the noise standard deviation scaled by
/// `noise_sd` (1 is the model; 0 gives noiseless observations).
pub fn sample_dataset_with_noise(
    pair: &ModelPair,
    n: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::invalid("sample size n must be >= 1"));
    }
    let n_blocks = n.div_ceil(POINTS_PER_BLOCK);
    let points: Vec<LabeledPoint> = (0..n_blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = rng::stream(seed, &[b as u64]);
            let len = POINTS_PER_BLOCK.min(n - b * POINTS_PER_BLOCK);
            (0..len)
                .map(|_| draw_point(pair, noise_sd, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Dataset {
        points,
        seed_info: Some(SeedInfo { seed }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Moments;

    fn spec(s: f64, r: f64) -> SobolevSpec {
        SobolevSpec::new(s, r).unwrap()
    }

    #[test]
    fn sobolev_norm_examples() {
        assert_eq!(sobolev_norm(&CoefVec::zeros(5), 1.3), 0.0);
        assert_eq!(sobolev_norm(&CoefVec::unit(4, 1), 1.0), 1.0);
        let h = CoefVec::new(vec![1.0, 0.5]).unwrap();
        assert!((sobolev_norm(&h, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spec_and_vector_validation() {
        assert!(SobolevSpec::new(0.0, 1.0).is_err());
        assert!(SobolevSpec::new(1.0, -1.0).is_err());
        assert!(CoefVec::new(vec![]).is_err());
        assert!(CoefVec::new(vec![1.0, f64::NAN]).is_err());
        let big = CoefVec::new(vec![2.0]).unwrap();
        assert!(ModelPair::new(big, CoefVec::zeros(1), spec(1.0, 1.0)).is_err());
    }

    #[test]
    fn project_examples() {
        let h = CoefVec::new(vec![3.0, 4.0, 5.0]).unwrap();
        assert_eq!(project(&h, 3).unwrap(), h);
        assert_eq!(project(&h, 2).unwrap().as_slice(), &[3.0, 4.0, 0.0]);
        let tail = h.sub(&project(&h, 1).unwrap()).norm_sq();
        assert!((tail - 41.0).abs() < 1e-12);
        assert!(project(&h, 0).is_err());
        assert!(project(&h, 4).is_err());
        let p = project(&h, 2).unwrap();
        assert_eq!(project(&p, 2).unwrap(), p);
    }

    #[test]
    fn separation_examples() {
        let sp = spec(1.0, 3.0);
        let f = CoefVec::new(vec![1.0, 1.0]).unwrap();
        let same = ModelPair::new(f.clone(), f.clone(), sp).unwrap();
        assert_eq!(separation(&same, None).unwrap(), 0.0);
        let two = ModelPair::new(CoefVec::new(vec![2.0]).unwrap(), CoefVec::zeros(1), sp).unwrap();
        assert_eq!(separation(&two, None).unwrap(), 2.0);
        let g = CoefVec::new(vec![0.0, 1.0]).unwrap();
        let p = ModelPair::new(f, g, sp).unwrap();
        assert_eq!(separation(&p, Some(1)).unwrap(), 1.0);
        assert_eq!(separation(&p, None).unwrap(), 1.0);
        assert!(separation(&p, Some(3)).is_err());
    }

    #[test]
    fn boundary_functions_sit_on_the_sphere() {
        let sp = spec(1.0, 1.0);
        let spike = make_boundary_function(sp, Profile::Spike, 8, 0).unwrap();
        assert_eq!(spike.as_slice()[0], 1.0);
        assert!(spike.as_slice()[1..].iter().all(|&c| c == 0.0));
        for (s, r) in [(1.0, 1.0), (0.5, 3.0), (2.5, 0.2)] {
            let sp = spec(s, r);
            for profile in [Profile::Spike, Profile::PolyDecay, Profile::RandomSigns] {
                let h = make_boundary_function(sp, profile, 300, 9).unwrap();
                let rel = (sobolev_norm(&h, s) - r * r).abs() / (r * r);
                assert!(rel < 1e-12, "{profile:?} s={s} R={r}: rel err {rel}");
            }
        }
        let poly = make_boundary_function(sp, Profile::PolyDecay, 16, 0).unwrap();
        let ratio = poly.coef(2) / poly.coef(1);
        assert!((ratio - 0.25).abs() < 1e-15);
        let a = make_boundary_function(sp, Profile::RandomSigns, 64, 42).unwrap();
        let b = make_boundary_function(sp, Profile::RandomSigns, 64, 42).unwrap();
        assert_eq!(a, b);
        assert!("wavelet".parse::<Profile>().is_err());
    }

    #[test]
    fn projection_tail_bound_holds_on_a_grid() {
        for (s, r) in [(1.0, 1.0), (0.75, 2.0), (2.0, 0.5)] {
            let sp = spec(s, r);
            for profile in [Profile::Spike, Profile::PolyDecay, Profile::RandomSigns] {
                let h = make_boundary_function(sp, profile, 256, 3).unwrap();
                for d in [1, 2, 3, 5, 8, 13, 32, 100, 255, 256] {
                    let tail = h.sub(&project(&h, d).unwrap()).norm_sq();
                    let bound = r * r * (d as f64).powf(-2.0 * s);
                    assert!(tail <= bound * (1.0 + 1e-12), "d={d}: {tail} > {bound}");
                }
            }
        }
    }

    #[test]
    fn pair_construction_examples() {
        let sp = spec(1.0, 1.0);
        let p0 = make_pair_with_separation(sp, 0.0, 32, 1).unwrap();
        assert_eq!(p0.f(), p0.g());
        let pmax = make_pair_with_separation(sp, 2.0, 32, 1).unwrap();
        assert_eq!(pmax.f(), &CoefVec::unit(32, 1));
        assert_eq!(pmax.g(), &CoefVec::unit(32, 1).scaled(-1.0));
        let p = make_pair_with_separation(sp, 0.5, 256, 7).unwrap();
        assert!((separation(&p, None).unwrap() - 0.5).abs() < 1e-10);
        assert!((sobolev_norm(p.f(), 1.0) - 1.0).abs() < 1e-12);
        assert!(matches!(
            make_pair_with_separation(sp, 2.5, 8, 0),
            Err(Error::InfeasibleSeparation { .. })
        ));
    }

    #[test]
    fn separation_is_monotone_in_d() {
        let sp = spec(1.0, 1.0);
        let f = make_boundary_function(sp, Profile::RandomSigns, 40, 1).unwrap();
        let g = make_boundary_function(sp, Profile::RandomSigns, 40, 2).unwrap();
        let pair = ModelPair::new(f, g, sp).unwrap();
        let seps: Vec<f64> = (1..=40).map(|d| separation(&pair, Some(d)).unwrap()).collect();
        assert!(seps.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(seps[39], separation(&pair, None).unwrap());
    }

    #[test]
    fn sample_dataset_rejects_empty_and_is_deterministic() {
        let pair = make_pair_with_separation(spec(1.0, 1.0), 1.0, 4, 0).unwrap();
        assert!(sample_dataset(&pair, 0, 1).is_err());
        let a = sample_dataset(&pair, 600, 11).unwrap();
        let b = sample_dataset(&pair, 600, 11).unwrap();
        assert_eq!(a, b);
        let (n0, n1) = a.counts();
        assert_eq!(n0 + n1, 600);
    }

    #[test]
    fn pure_noise_coordinates_have_zero_mean() {
        let sp = spec(1.0, 1.0);
        let pair = ModelPair::new(CoefVec::zeros(100), CoefVec::zeros(100), sp).unwrap();
        let n = 10_000;
        let data = sample_dataset(&pair, n, 5).unwrap();
        let tol = 4.0 / ((n * 100) as f64).sqrt();
        let all: Moments = data
            .points()
            .iter()
            .flat_map(|p| p.x.as_slice().iter().copied())
            .collect();
        assert!(all.mean.abs() < tol, "grand mean {}", all.mean);
        let frac = data.counts().1 as f64 / n as f64;
        assert!((frac - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn within_class_variance_and_independence() {
        let sp = spec(1.0, 1.0);
        let pair = make_pair_with_separation(sp, 1.0, 3, 0).unwrap();
        let data = sample_dataset(&pair, 200_000, 17).unwrap();
        for label in [Label::Zero, Label::One] {
            let pts: Vec<&LabeledPoint> = data.points().iter().filter(|p| p.y == label).collect();
            let m = pts.len() as f64;
            assert!(m > 1e5 * 0.95);
            let center = pair.drift(label);
            for j in 0..3 {
                let mo: Moments = pts.iter().map(|p| p.x.as_slice()[j]).collect();
                assert!((mo.variance() - 1.0).abs() < 0.02, "var {}", mo.variance());
                assert!((mo.mean - center.as_slice()[j]).abs() < 4.0 / m.sqrt());
            }
            let cov: f64 = pts
                .iter()
                .map(|p| (p.x.as_slice()[0] - center.as_slice()[0]) * (p.x.as_slice()[1] - center.as_slice()[1]))
                .sum::<f64>()
                / m;
            assert!(cov.abs() < 4.0 / m.sqrt(), "cov {cov}");
        }
    }

    #[test]
    fn noiseless_sampling_returns_centers() {
        let pair = make_pair_with_separation(spec(1.0, 1.0), 1.0, 6, 3).unwrap();
        let data = sample_dataset_with_noise(&pair, 50, 0.0, 1).unwrap();
        for p in data.points() {
            assert_eq!(&p.x, pair.drift(p.y));
        }
    }
}
