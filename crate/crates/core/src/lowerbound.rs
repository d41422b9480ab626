//! Building blocks of the minimax lower bound: sign-hypercube packings,
//! the hypothesis set, angle and cone-mass estimates, KL bookkeeping,
//! Fano's bound and the L¹ separation of linear Bayes rules.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{dist_sq, dot, CoefVec, SobolevSpec};
use crate::risk::{RiskEstimate, RiskKind};
use crate::rng;
use crate::stats::Moments;

/// Candidates drawn by [`vg_packing`] before giving up.
pub const PACKING_BUDGET: usize = 1_000_000;

/// Seeds tried by [`build_theta_set`] before reporting a failure.
const PACKING_RETRIES: u64 = 4;

/// Words of `{−1, +1}^m` with pairwise Hamming distance `> m/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSet {
    m: usize,
    words: Vec<Vec<i8>>,
}

impl PackingSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn words(&self) -> &[Vec<i8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Smallest pairwise Hamming distance (`None` for fewer than two words).
    pub fn min_distance(&self) -> Option<usize> {
        let mut best = None;
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                let h = hamming(a, b);
                best = Some(best.map_or(h, |x: usize| x.min(h)));
            }
        }
        best
    }

    /// Exhaustive check of both packing invariants.
    pub fn verify(&self) -> Result<()> {
        let need = packing_target(self.m);
        if self.words.len() < need {
            return Err(Error::ConstructionFailure(format!(
                "{} words < ceil(e^(m/8)) = {need}",
                self.words.len()
            )));
        }
        for w in &self.words {
            if w.len() != self.m || w.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::ConstructionFailure("word is not a sign vector of length m".into()));
            }
        }
        for (i, a) in self.words.iter().enumerate() {
            for (j, b) in self.words.iter().enumerate().skip(i + 1) {
                let h = hamming(a, b);
                if 4 * h <= self.m {
                    return Err(Error::ConstructionFailure(format!(
                        "words {i} and {j} at Hamming distance {h} <= m/4"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn hamming(a: &[i8], b: &[i8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `⌈e^{m/8}⌉`.
pub fn packing_target(m: usize) -> usize {
    (m as f64 / 8.0).exp().ceil() as usize
}

/// Randomized greedy packing: draws uniform sign vectors and keeps each one
/// that is farther than `m/4` from every kept word, until `⌈e^{m/8}⌉`
/// words are found or [`PACKING_BUDGET`] candidates have been tried.
pub fn vg_packing(m: usize, seed: u64) -> Result<PackingSet> {
    if m == 0 {
        return Err(Error::invalid("packing dimension m must be >= 1"));
    }
    let target = packing_target(m);
    let limbs = m.div_ceil(64);
    let mut stream = rng::stream(seed, &[0x7AC4]);
    let mut kept: Vec<Vec<u64>> = Vec::with_capacity(target);
    let tail_mask = if m.is_multiple_of(64) { u64::MAX } else { (1u64 << (m % 64)) - 1 };
    for _ in 0..PACKING_BUDGET {
        let mut cand: Vec<u64> = (0..limbs).map(|_| stream.random::<u64>()).collect();
        *cand.last_mut().expect("m >= 1") &= tail_mask;
        let far = kept.iter().all(|w| {
            let h: u32 = w.iter().zip(&cand).map(|(a, b)| (a ^ b).count_ones()).sum();
            4 * h as usize > m
        });
        if far {
            kept.push(cand);
            if kept.len() == target {
                let words = kept
                    .iter()
                    .map(|w| (0..m).map(|i| if (w[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 }).collect())
                    .collect();
                let set = PackingSet { m, words };
                set.verify()?;
                return Ok(set);
            }
        }
    }
    Err(Error::ConstructionFailure(format!(
        "found {} of {target} words for m = {m} within {PACKING_BUDGET} candidates",
        kept.len()
    )))
}

/// Hypotheses `θ = (Δ, ε·γ)` for `γ` in a packing of `{−1, +1}^{d−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSet {
    pub delta: f64,
    pub eps: f64,
    pub d: usize,
    pub thetas: Vec<CoefVec>,
}

/// Builds the hypothesis set; requires `d ≥ 7` and `Δ ≥ √d·ε` (equality
/// up to rounding is accepted, e.g. `Δ = 0.3, ε = 0.1, d = 9`).
pub fn build_theta_set(delta: f64, eps: f64, d: usize, seed: u64) -> Result<ThetaSet> {
    if d < 7 {
        return Err(Error::invalid(format!("requires d >= 7, got d = {d}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("requires eps > 0, got {eps}")));
    }
    let floor = (d as f64).sqrt() * eps;
    if !(delta >= floor * (1.0 - 1e-12)) {
        return Err(Error::invalid(format!(
            "requires delta >= sqrt(d)*eps = {floor}, got delta = {delta}"
        )));
    }
    let mut last = None;
    for attempt in 0..PACKING_RETRIES {
        match vg_packing(d - 1, rng::derive_seed(seed, &[attempt])) {
            Ok(packing) => {
                let thetas = packing
                    .words()
                    .iter()
                    .map(|w| {
                        let mut v = Vec::with_capacity(d);
                        v.push(delta);
                        v.extend(w.iter().map(|&s| eps * s as f64));
                        CoefVec::new(v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(ThetaSet { delta, eps, d, thetas });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Internal angle `arccos(⟨a, b⟩ / (‖a‖‖b‖))` between two nonzero vectors,
/// in `[0, π]`.
pub fn pairwise_angle(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let (na, nb) = (dot(a, a).sqrt(), dot(b, b).sqrt());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::invalid("angle undefined for a zero vector"));
    }
    // 2·atan2(‖â − b̂‖, ‖â + b̂‖) stays accurate near 0 and π, where acos
    // of the cosine does not
    let (mut minus, mut plus) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x / na, y / nb);
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    Ok((2.0 * minus.sqrt().atan2(plus.sqrt())).clamp(0.0, PI))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleReport {
    pub min_angle: f64,
    pub max_angle: f64,
    /// `√(d−1)·ε / (2Δ)`.
    pub lower_bound: f64,
    /// `π/2`.
    pub upper_bound: f64,
    pub pairs: usize,
    pub pass: bool,
}

/// Checks `√(d−1)ε/(2Δ) ≤ ∠(θ, θ′) ≤ π/2` for every pair, with `10⁻¹²`
/// slack on both sides.
pub fn angle_bounds_check(tset: &ThetaSet) -> Result<AngleReport> {
    let lower_bound = ((tset.d - 1) as f64).sqrt() * tset.eps / (2.0 * tset.delta);
    let (mut lo, mut hi, mut pairs) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for (i, a) in tset.thetas.iter().enumerate() {
        for b in &tset.thetas[i + 1..] {
            let ang = pairwise_angle(a.as_slice(), b.as_slice())?;
            lo = lo.min(ang);
            hi = hi.max(ang);
            pairs += 1;
        }
    }
    let upper_bound = PI / 2.0;
    Ok(AngleReport {
        min_angle: lo,
        max_angle: hi,
        lower_bound,
        upper_bound,
        pairs,
        pass: pairs > 0 && lo >= lower_bound - 1e-12 && hi <= upper_bound + 1e-12,
    })
}

/// Open double cone `{z + a·u + b·v : ab > 0}` in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    z: [f64; 2],
    u: [f64; 2],
    v: [f64; 2],
    angle: f64,
}

impl ConeSpec {
    /// Cone with apex `z` spanned by the directions of `u` and `v`.
    pub fn new(z: [f64; 2], u: [f64; 2], v: [f64; 2]) -> Result<Self> {
        let unit = |w: [f64; 2]| -> Result<[f64; 2]> {
            let n = w[0].hypot(w[1]);
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::invalid("cone directions must be nonzero"));
            }
            Ok([w[0] / n, w[1] / n])
        };
        let (u, v) = (unit(u)?, unit(v)?);
        let det = u[0] * v[1] - u[1] * v[0];
        if det.abs() < 1e-12 {
            return Err(Error::invalid("cone directions must be linearly independent"));
        }
        if !(z[0].is_finite() && z[1].is_finite()) {
            return Err(Error::invalid("cone apex must be finite"));
        }
        let angle = (u[0] * v[0] + u[1] * v[1]).clamp(-1.0, 1.0).acos();
        Ok(ConeSpec { z, u, v, angle })
    }

    /// Cone with `u = e₁` and `v` at angle `a ∈ (0, π)` from it.
    pub fn from_angle(z: [f64; 2], a: f64) -> Result<Self> {
        if !(a > 0.0 && a < PI) {
            return Err(Error::invalid(format!("cone angle must lie in (0, pi), got {a}")));
        }
        ConeSpec::new(z, [1.0, 0.0], [a.cos(), a.sin()])
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn apex(&self) -> [f64; 2] {
        self.z
    }

    /// Membership in the open cone; boundary points are outside.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (x, y) = (p[0] - self.z[0], p[1] - self.z[1]);
        let det = self.u[0] * self.v[1] - self.u[1] * self.v[0];
        let a = (x * self.v[1] - y * self.v[0]) / det;
        let b = (self.u[0] * y - self.u[1] * x) / det;
        (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
    }

    /// `(A/2π)·e^{−‖z‖²}`.
    pub fn mass_lower_bound(&self) -> f64 {
        self.angle / (2.0 * PI) * (-(self.z[0] * self.z[0] + self.z[1] * self.z[1])).exp()
    }
}

/// Standard Gaussian averages in `R^dim`, block-seeded and merged in
/// order.
fn gaussian_average<F>(dim: usize, n_mc: usize, seed: u64, value: F) -> Result<Moments>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n_mc == 0 {
        return Err(Error::invalid("n_mc must be >= 1"));
    }
    let parts: Vec<Moments> = rng::blocks(n_mc)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut stream = rng::stream(seed, &[b]);
            let mut w = vec![0.0; dim];
            let mut m = Moments::default();
            for _ in 0..len {
                for wi in w.iter_mut() {
                    *wi = StandardNormal.sample(&mut stream);
                }
                m.push(value(&w));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

fn frequency(m: Moments, n_mc: usize) -> RiskEstimate {
    RiskEstimate {
        mean: m.mean,
        stderr: (m.mean * (1.0 - m.mean) / n_mc as f64).max(0.0).sqrt(),
        n_mc,
        kind: RiskKind::Probability,
    }
}

/// Standard 2-D Gaussian mass of the cone.
pub fn cone_mass_mc(cone: &ConeSpec, n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    let m = gaussian_average(2, n_mc, seed, |w| if cone.contains([w[0], w[1]]) { 1.0 } else { 0.0 })?;
    Ok(frequency(m, n_mc))
}

/// KL divergence between the laws of `n` training pairs under `θ` and
/// `θ₀`: `n‖θ − θ₀‖²/4`.
pub fn kl_training(theta: &[f64], theta0: &[f64], n: usize) -> Result<f64> {
    if theta.len() != theta0.len() {
        return Err(Error::DimensionMismatch {
            expected: theta0.len(),
            actual: theta.len(),
        });
    }
    Ok(n as f64 * dist_sq(theta, theta0) / 4.0)
}

/// Fano's bound `(avg_kl + ln 2) / ln N` on the average probability of
/// identifying the right hypothesis among `N`.
pub fn fano_bound(avg_kl: f64, cardinality: usize) -> Result<f64> {
    if cardinality < 2 {
        return Err(Error::invalid(format!("Fano's bound needs N >= 2, got {cardinality}")));
    }
    fano_bound_ln(avg_kl, (cardinality as f64).ln())
}

/// [`fano_bound`] with `ln N` given directly, for non-integer sizes such as
/// `N = e^{(d−1)/8}`.
pub fn fano_bound_ln(avg_kl: f64, ln_n: f64) -> Result<f64> {
    if !(avg_kl >= 0.0) {
        return Err(Error::invalid(format!("average KL must be >= 0, got {avg_kl}")));
    }
    if !(ln_n >= std::f64::consts::LN_2) {
        return Err(Error::invalid(format!("Fano's bound needs N >= 2, got ln N = {ln_n}")));
    }
    Ok((avg_kl + std::f64::consts::LN_2) / ln_n)
}

/// Frequency over `W ~ N(0, I_d)` at which the Bayes rules of `θ` and `θ′`
/// against the zero drift disagree. Rule `θ` says 1 iff
/// `‖W − θ‖ ≤ ‖W‖`, i.e. `⟨θ, W⟩ ≥ ‖θ‖²/2`.
pub fn l1_classifier_distance_mc(theta: &[f64], theta_prime: &[f64], n_mc: usize, seed: u64) -> Result<RiskEstimate> {
    if theta.len() != theta_prime.len() || theta.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            actual: theta_prime.len(),
        });
    }
    let (h, hp) = (dot(theta, theta) / 2.0, dot(theta_prime, theta_prime) / 2.0);
    let m = gaussian_average(theta.len(), n_mc, seed, |w| {
        if (dot(theta, w) >= h) != (dot(theta_prime, w) >= hp) {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(frequency(m, n_mc))
}

/// `√(d−1)·ε / (4πΔ) · e^{−Δ²}`.
pub fn l1_lower_bound(d: usize, eps: f64, delta: f64) -> f64 {
    ((d - 1) as f64).sqrt() * eps / (4.0 * PI * delta) * (-delta * delta).exp()
}

/// Result of [`sobolev_admissibility`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevCheck {
    /// `(d−1)·ε²·d^{2s}`.
    pub bound_lhs: f64,
    /// Largest `Σ_{j≥2} θ_j² j^{2s}` over the set.
    pub weighted_max: f64,
    /// `R² − Δ²`.
    pub rhs: f64,
    pub pass: bool,
}

/// Whether every `θ` fits the Sobolev ball after reserving `Δ²` for the
/// first coordinate: both the coarse bound `(d−1)ε²d^{2s} ≤ R² − Δ²` and
/// the exact weighted sums are checked.
pub fn sobolev_admissibility(tset: &ThetaSet, spec: SobolevSpec) -> SobolevCheck {
    let s = spec.s();
    let bound_lhs = (tset.d - 1) as f64 * tset.eps * tset.eps * (tset.d as f64).powf(2.0 * s);
    let weighted_max = tset
        .thetas
        .iter()
        .map(|t| {
            t.as_slice()[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * c * ((i + 2) as f64).powf(2.0 * s))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let rhs = spec.radius() * spec.radius() - tset.delta * tset.delta;
    SobolevCheck {
        bound_lhs,
        weighted_max,
        rhs,
        pass: bound_lhs <= rhs && weighted_max <= rhs,
    }
}

/// Which branch of the minimax lower bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Δ` below the threshold: `n^{−s/(2s+1)}` rate.
    Slow,
    /// `Δ` above the threshold: `n^{−2s/(2s+1)}/Δ` rate.
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxBudget {
    pub value: f64,
    pub regime: Regime,
    /// `R^{1/(2s+1)} n^{−s/(2s+1)}`.
    pub threshold: f64,
}

/// Minimax lower-bound expression with the absolute constant set to 1.
pub fn minimax_budget(n: usize, spec: SobolevSpec, delta: f64) -> Result<MinimaxBudget> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let r = spec.radius();
    if !(delta > 0.0 && delta <= r / 2.0) {
        return Err(Error::invalid(format!("requires 0 < delta <= R/2 = {}, got {delta}", r / 2.0)));
    }
    let e = 2.0 * spec.s() + 1.0;
    let n = n as f64;
    let threshold = r.powf(1.0 / e) * n.powf(-spec.s() / e);
    Ok(if delta < threshold {
        MinimaxBudget {
            value: (-2.0 * r.powf(2.0 / e)).exp() * threshold,
            regime: Regime::Slow,
            threshold,
        }
    } else {
        MinimaxBudget {
            value: (-2.0 * delta * delta).exp() / delta * r.powf(2.0 / e) * n.powf(-2.0 * spec.s() / e),
            regime: Regime::Fast,
            threshold,
        }
    })
}
