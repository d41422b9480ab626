use std::f64::consts::{E, PI};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{dist_sq, dot};
use crate::rng;
use crate::stats::{logistic, Moments};

/// Result of [`smoothness_probe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessProbe {
    /// `|η(B(x, r)) − η(x)|`, where `η(B)` is the mean of η over the ball.
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// Estimated mean of η over the ball.
    pub ball_eta: f64,
    /// η at the center.
    pub eta_center: f64,
    /// Mixture mass `μ(B(x, r))`.
    pub mass: f64,
    pub mass_stderr: f64,
    pub hits: u64,
    pub n_mc: usize,
}

/// `L_R = 60πe·d·R²·e^{R²/d}`, the Hölder-type constant of η with exponent
/// `2/d` for the `d`-dimensional mixture.
pub fn smoothness_constant(d: usize, radius: f64) -> f64 {
    let d = d as f64;
    60.0 * PI * E * d * radius * radius * (radius * radius / d).exp()
}

/// Monte Carlo comparison of η over a ball with η at its center, for the
/// equal-weight mixture of `N(0, I)` (label 0) and `N(m, I)` (label 1) in
/// `R^d`, where `m = mean_shift`.
pub fn smoothness_probe(mean_shift: &[f64], x: &[f64], r: f64, n_mc: usize, seed: u64) -> Result<SmoothnessProbe> {
    let d = mean_shift.len();
    if d == 0 || x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d.max(1),
            actual: x.len(),
        });
    }
    if !(r > 0.0) {
        return Err(Error::invalid(format!("ball radius must be > 0, got {r}")));
    }
    if n_mc == 0 {
        return Err(Error::invalid("n_mc must be >= 1"));
    }
    let offset = 0.5 * dot(mean_shift, mean_shift);
    let eta = |p: &[f64]| logistic(dot(mean_shift, p) - offset);
    let r2 = r * r;
    let parts: Vec<Moments> = rng::blocks(n_mc)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut stream = rng::stream(seed, &[b]);
            let mut p = vec![0.0; d];
            let mut m = Moments::default();
            for _ in 0..len {
                let one = stream.random::<bool>();
                for (pi, &mi) in p.iter_mut().zip(mean_shift) {
                    let z: f64 = StandardNormal.sample(&mut stream);
                    *pi = if one { mi + z } else { z };
                }
                if dist_sq(&p, x) <= r2 {
                    m.push(eta(&p));
                }
            }
            m
        })
        .collect();
    let mut inside = Moments::default();
    for p in &parts {
        inside.merge(p);
    }
    if inside.count < 2 {
        return Err(Error::InsufficientSamples {
            hits: inside.count,
            needed: 2,
        });
    }
    let eta_center = eta(x);
    let mass = inside.count as f64 / n_mc as f64;
    Ok(SmoothnessProbe {
        lhs: (inside.mean - eta_center).abs(),
        lhs_stderr: inside.stderr(),
        ball_eta: inside.mean,
        eta_center,
        mass,
        mass_stderr: (mass * (1.0 - mass) / n_mc as f64).sqrt(),
        hits: inside.count,
        n_mc,
    })
}
