//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use pbqdho::gaussian::{GaussianPolynomial, QuadraticForm};
use pbqdho::{Complex64, WeightedSpace};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Trapezoid rule for `∫ conj(f)·g·weight` over ℝ², in the frame that
/// diagonalises the real part of the combined exponent and centred on its
/// real stationary point. Returns the value and `∫ |conj(f)·g·weight|`.
pub fn quadrature_inner_product(f: &GaussianPolynomial, g: &GaussianPolynomial, space: &WeightedSpace, half_width: f64, n: usize) -> (Complex64, f64) {
    let (qf, qg) = (f.exponent(), g.exponent());
    let a11 = qf.k1.re + qg.k1.re + space.c1;
    let a22 = qf.k2.re + qg.k2.re + space.c2;
    let a12 = 0.5 * (qf.k3.re + qg.k3.re);
    let ar = Matrix2::new(a11, a12, a12, a22);
    let eig = SymmetricEigen::new(ar);
    assert!(eig.eigenvalues.min() > 0.0, "oracle needs a convergent integrand");
    let lin = Vector2::new(qf.l1.re + qg.l1.re, qf.l2.re + qg.l2.re);
    let centre = -0.5 * ar.try_inverse().unwrap() * lin;
    let scale = Vector2::new(1.0 / eig.eigenvalues[0].sqrt(), 1.0 / eig.eigenvalues[1].sqrt());
    let jac = scale[0] * scale[1];
    let h = 2.0 * half_width / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for i in 0..n {
        let s1 = -half_width + h * i as f64;
        for j in 0..n {
            let s2 = -half_width + h * j as f64;
            let p = centre + eig.eigenvectors * Vector2::new(s1 * scale[0], s2 * scale[1]);
            let (x, y) = (p[0], p[1]);
            let v = f.eval(x, y).conj() * g.eval(x, y) * (-(space.c1 * x * x + space.c2 * y * y)).exp();
            sum += v;
            abs_sum += v.norm();
        }
    }
    (sum * h * h * jac, abs_sum * h * h * jac)
}

pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    c(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale))
}

/// Polynomial of total degree ≤ `max_degree` with O(1) complex coefficients.
pub fn random_state<R: Rng>(rng: &mut R, q: QuadraticForm, max_degree: usize) -> GaussianPolynomial {
    let mut monomials = Vec::new();
    for n in 0..=max_degree {
        for j in 0..=n {
            if rng.random_bool(0.6) || (n == 0) {
                monomials.push((n - j, j, random_complex(rng, 1.0)));
            }
        }
    }
    GaussianPolynomial::from_monomials(&monomials, q).unwrap()
}

/// Real part of the combined exponent matrix of `conj(f)·g·weight`.
pub fn combined_real(qf: &QuadraticForm, qg: &QuadraticForm, space: &WeightedSpace) -> Matrix2<f64> {
    let a12 = 0.5 * (qf.k3.re + qg.k3.re);
    Matrix2::new(qf.k1.re + qg.k1.re + space.c1, a12, a12, qf.k2.re + qg.k2.re + space.c2)
}

pub fn random_form<R: Rng>(rng: &mut R, re: (f64, f64), im: f64, linear: f64) -> QuadraticForm {
    let mut r = |lo: f64, hi: f64| rng.random_range(lo..=hi);
    QuadraticForm::new(c(r(re.0, re.1), r(-im, im)), c(r(re.0, re.1), r(-im, im)), c(r(-0.4, 0.4), r(-im, im)))
        .with_linear(c(r(-linear, linear), r(-linear, linear)), c(r(-linear, linear), r(-linear, linear)))
}

/// A convergent case: real part of the combined matrix has smallest eigenvalue ≥ `min_eig`.
pub fn convergent_case<R: Rng>(rng: &mut R, min_eig: f64) -> (GaussianPolynomial, GaussianPolynomial, WeightedSpace) {
    loop {
        let qf = random_form(rng, (-0.2, 1.2), 0.4, 0.6);
        let qg = random_form(rng, (-0.2, 1.2), 0.4, 0.6);
        let space = WeightedSpace::new(rng.random_range(-0.3..=0.8), rng.random_range(-0.3..=0.8));
        let m = combined_real(&qf, &qg, &space);
        if SymmetricEigen::new(m).eigenvalues.min() >= min_eig {
            return (random_state(rng, qf, 3), random_state(rng, qg, 3), space);
        }
    }
}

/// A divergent case: the combined real matrix is not positive definite.
pub fn divergent_case<R: Rng>(rng: &mut R) -> (GaussianPolynomial, GaussianPolynomial, WeightedSpace) {
    loop {
        let qf = random_form(rng, (-1.0, 0.8), 0.5, 0.5);
        let qg = random_form(rng, (-1.0, 0.8), 0.5, 0.5);
        let space = WeightedSpace::new(rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5));
        let m = combined_real(&qf, &qg, &space);
        if SymmetricEigen::new(m).eigenvalues.min() <= 0.0 {
            return (random_state(rng, qf, 2), random_state(rng, qg, 2), space);
        }
    }
}

/// `α = conj(Γ)/D`, `β = conj(δ)/D` with `D = Γ·conj(δ) − δ·conj(Γ)`, computed here from scratch.
pub fn oracle_alpha_beta(g: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let det = g * d.conj() - d * g.conj();
    (g.conj() / det, d.conj() / det)
}

/// `ω± = √(k/m − γ²/4m²) ± iγ/2m`.
pub fn oracle_omegas(m: f64, gamma: f64, k: f64) -> (Complex64, Complex64) {
    let re = (k / m - gamma * gamma / (4.0 * m * m)).sqrt();
    (c(re, gamma / (2.0 * m)), c(re, -gamma / (2.0 * m)))
}
