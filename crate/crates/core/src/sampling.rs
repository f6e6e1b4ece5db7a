//! Seeded random parameter draws for property suites and scans.
//!
//! `Γ` and `δ` have modulus in `[0.5, 2]` and uniform phase; draws with
//! `|Γ·conj(δ) − δ·conj(Γ)| < 1e-3` are rejected so `α`, `β` stay well
//! conditioned.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::qdho::{build_params, ModelParams};
use crate::vacuum::ratio_condition_defect;

pub const MIN_DET: f64 = 1e-3;

/// Deterministic generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.5..=2.0), rng.random_range(0.0..TAU))
}

/// `(m, γ, k)` with `Ω ∈ [0.2, 2]`, so never overdamped.
fn random_physics<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    let m = rng.random_range(0.5..=2.0);
    let gamma = rng.random_range(0.0..=2.0);
    let omega: f64 = rng.random_range(0.2..=2.0);
    (m, gamma, m * omega * omega + gamma * gamma / (4.0 * m))
}

/// Any valid parameter set.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> ModelParams {
    loop {
        let (m, gamma, k) = random_physics(rng);
        let (g, d) = (random_coefficient(rng), random_coefficient(rng));
        if let Ok(p) = build_params(m, gamma, k, g, d) {
            if p.det.norm() >= MIN_DET {
                return p;
            }
        }
    }
}

/// Parameters satisfying the ratio condition: the phase of `Γ` is solved from
/// `arg Γ + arg δ = arg ω₊ + π/2 (mod π)`.
pub fn random_ratio_params<R: Rng + ?Sized>(rng: &mut R) -> ModelParams {
    loop {
        let (m, gamma, k) = random_physics(rng);
        let d = random_coefficient(rng);
        let theta = (gamma / (2.0 * m)).atan2(((k - gamma * gamma / (4.0 * m)) / m).sqrt());
        let branch = if rng.random_bool(0.5) { PI } else { 0.0 };
        let g = Complex64::from_polar(rng.random_range(0.5..=2.0), theta + FRAC_PI_2 - d.arg() + branch);
        if let Ok(p) = build_params(m, gamma, k, g, d) {
            if p.det.norm() >= MIN_DET {
                return p;
            }
        }
    }
}

/// Parameters whose ratio-condition defect is at least `min_defect`.
pub fn random_violating_params<R: Rng + ?Sized>(rng: &mut R, min_defect: f64) -> ModelParams {
    loop {
        let p = random_params(rng);
        if ratio_condition_defect(&p).map(|d| d.norm() >= min_defect).unwrap_or(false) {
            return p;
        }
    }
}
