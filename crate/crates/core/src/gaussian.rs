//! Polynomial-times-Gaussian states `P(x, y)·exp(−q(x, y))`.
//!
//! This class is closed under every [`FirstOrderOperator`], so ladder states
//! built from a Gaussian vacuum never leave it and all inner products have
//! closed forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::operator::{FirstOrderOperator, WeightedSpace};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum GaussianError {
    #[error("divergent integral: real part of the combined quadratic form is not positive definite (leading minors {minors:?}, borderline: {borderline})")]
    DivergentIntegral { borderline: bool, minors: [f64; 2] },
    #[error("polynomial degree {degree} exceeds the cap of {}", tol::MAX_DEGREE)]
    DegreeCapExceeded { degree: usize },
    #[error("states with different Gaussian exponents cannot be added")]
    ExponentMismatch,
}

/// Exponent `q(x,y) = k1·x² + k2·y² + k3·x·y + l1·x + l2·y` of `exp(−q)`.
///
/// The linear terms are zero for every state of the damped oscillator; they
/// only appear for shifted vacua of the regular fixture model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub k1: Complex64,
    pub k2: Complex64,
    pub k3: Complex64,
    #[serde(default)]
    pub l1: Complex64,
    #[serde(default)]
    pub l2: Complex64,
}

impl QuadraticForm {
    pub fn new(k1: Complex64, k2: Complex64, k3: Complex64) -> Self {
        Self { k1, k2, k3, l1: ZERO, l2: ZERO }
    }

    pub fn real(k1: f64, k2: f64, k3: f64) -> Self {
        Self::new(k1.into(), k2.into(), k3.into())
    }

    pub fn with_linear(mut self, l1: Complex64, l2: Complex64) -> Self {
        self.l1 = l1;
        self.l2 = l2;
        self
    }

    /// Symmetric matrix `[[k1, k3/2], [k3/2, k2]]` of the quadratic part.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let h = self.k3 * 0.5;
        [[self.k1, h], [h, self.k2]]
    }

    pub fn conj(&self) -> Self {
        Self {
            k1: self.k1.conj(),
            k2: self.k2.conj(),
            k3: self.k3.conj(),
            l1: self.l1.conj(),
            l2: self.l2.conj(),
        }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        [self.k1 - o.k1, self.k2 - o.k2, self.k3 - o.k3, self.l1 - o.l1, self.l2 - o.l2]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn has_linear_part(&self) -> bool {
        self.l1 != ZERO || self.l2 != ZERO
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.k1 * x * x + self.k2 * y * y + self.k3 * x * y + self.l1 * x + self.l2 * y
    }
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

#[inline]
fn tri_len(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// `P(x,y)·exp(−q(x,y))` with `P` stored densely over monomials `xⁱyʲ`, `i + j ≤ degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPolynomial {
    degree: usize,
    coeffs: Vec<Complex64>,
    exponent: QuadraticForm,
}

impl GaussianPolynomial {
    /// `exp(−q)`.
    pub fn gaussian(exponent: QuadraticForm) -> Self {
        Self { degree: 0, coeffs: vec![Complex64::new(1.0, 0.0)], exponent }
    }

    /// Sum of `c·xⁱyʲ` over the given monomials times `exp(−q)`.
    pub fn from_monomials(monomials: &[(usize, usize, Complex64)], exponent: QuadraticForm) -> Result<Self, GaussianError> {
        let degree = monomials.iter().map(|&(i, j, _)| i + j).max().unwrap_or(0);
        if degree > tol::MAX_DEGREE {
            return Err(GaussianError::DegreeCapExceeded { degree });
        }
        let mut coeffs = vec![ZERO; tri_len(degree)];
        for &(i, j, c) in monomials {
            coeffs[tri_index(i, j)] += c;
        }
        Ok(Self { degree, coeffs, exponent })
    }

    /// Same polynomial over a different exponent.
    pub fn with_exponent(&self, exponent: QuadraticForm) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.clone(), exponent }
    }

    pub fn zero_like(other: &Self) -> Self {
        Self { degree: 0, coeffs: vec![ZERO], exponent: other.exponent }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponent(&self) -> &QuadraticForm {
        &self.exponent
    }

    /// Coefficient of `xⁱyʲ` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i + j > self.degree {
            ZERO
        } else {
            self.coeffs[tri_index(i, j)]
        }
    }

    /// `(i, j, coefficient)` for every stored monomial.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.degree).flat_map(move |n| (0..=n).map(move |j| (n - j, j, self.coeffs[tri_index(n - j, j)])))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect(), exponent: self.exponent }
    }

    fn resized(&self, degree: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; tri_len(degree)];
        for (i, j, c) in self.monomials() {
            out[tri_index(i, j)] = c;
        }
        out
    }

    fn same_exponent(&self, other: &Self) -> bool {
        let scale = 1.0f64.max(self.exponent.max_diff(&QuadraticForm::default()));
        self.exponent.max_diff(&other.exponent) <= tol::ALG * scale
    }

    pub fn add(&self, other: &Self) -> Result<Self, GaussianError> {
        // the zero state adopts any exponent
        if other.is_zero(0.0) {
            return Ok(self.clone());
        }
        if self.is_zero(0.0) {
            return Ok(other.clone());
        }
        if !self.same_exponent(other) {
            return Err(GaussianError::ExponentMismatch);
        }
        let degree = self.degree.max(other.degree);
        let mut coeffs = self.resized(degree);
        for (i, j, c) in other.monomials() {
            coeffs[tri_index(i, j)] += c;
        }
        Ok(Self { degree, coeffs, exponent: self.exponent })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GaussianError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient of `self − other` relative to `max(1, largest coefficient of self)`.
    pub fn scaled_residual(&self, other: &Self) -> Result<f64, GaussianError> {
        let diff = self.sub(other)?;
        Ok(diff.max_abs_coeff() / 1.0f64.max(self.max_abs_coeff()))
    }

    /// Exact action of a first-order operator.
    ///
    /// `∂x exp(−q) = −(2k1·x + k3·y + l1)·exp(−q)` and likewise for `∂y`.
    pub fn apply(&self, op: &FirstOrderOperator) -> Result<Self, GaussianError> {
        let raises = !(op.cx == ZERO && op.cy == ZERO && op.dx == ZERO && op.dy == ZERO);
        let degree = if raises { self.degree + 1 } else { self.degree };
        if degree > tol::MAX_DEGREE {
            return Err(GaussianError::DegreeCapExceeded { degree });
        }
        let q = &self.exponent;
        // multiplier of x and y after pulling derivatives through exp(−q)
        let mx = op.cx - op.dx * q.k1 * 2.0 - op.dy * q.k3;
        let my = op.cy - op.dx * q.k3 - op.dy * q.k2 * 2.0;
        let m0 = op.e - op.dx * q.l1 - op.dy * q.l2;

        let mut out = vec![ZERO; tri_len(degree)];
        for (i, j, c) in self.monomials() {
            if c == ZERO {
                continue;
            }
            out[tri_index(i, j)] += m0 * c;
            if raises {
                out[tri_index(i + 1, j)] += mx * c;
                out[tri_index(i, j + 1)] += my * c;
            }
            if i > 0 {
                out[tri_index(i - 1, j)] += op.dx * c * i as f64;
            }
            if j > 0 {
                out[tri_index(i, j - 1)] += op.dy * c * j as f64;
            }
        }
        Ok(Self { degree, coeffs: out, exponent: self.exponent })
    }

    /// Pointwise value `P(x,y)·exp(−q(x,y))`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let mut p = ZERO;
        for (i, j, c) in self.monomials() {
            if c != ZERO {
                p += c * x.powi(i as i32) * y.powi(j as i32);
            }
        }
        p * (-self.exponent.eval(x, y)).exp()
    }
}

/// Square-integrability verdict for a Gaussian state in a weighted space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityVerdict {
    pub integrable: bool,
    /// `2·Re(M(q)) + diag(c1, c2)`, the quadratic form of `|f|²·weight`.
    pub gram_matrix_real: [[f64; 2]; 2],
    pub leading_minors: [f64; 2],
    pub witness: Option<String>,
}

impl IntegrabilityVerdict {
    /// Smallest eigenvalue of the real Gram matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let [[a, b], [_, d]] = self.gram_matrix_real;
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        mean - r
    }
}

fn sylvester(m: [[f64; 2]; 2]) -> ([f64; 2], Option<String>) {
    let m1 = m[0][0];
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let witness = if m1 <= 0.0 {
        Some(format!("first leading minor {m1:e} <= 0"))
    } else if m2 <= 0.0 {
        Some(format!("second leading minor (determinant) {m2:e} <= 0"))
    } else {
        None
    };
    ([m1, m2], witness)
}

/// Whether `f` has finite norm in `space`. Only the exponent matters: a
/// polynomial prefactor never changes the verdict.
pub fn integrability_check(f: &GaussianPolynomial, space: &WeightedSpace) -> IntegrabilityVerdict {
    let q = f.exponent();
    let m = [
        [2.0 * q.k1.re + space.c1, q.k3.re],
        [q.k3.re, 2.0 * q.k2.re + space.c2],
    ];
    let (minors, witness) = sylvester(m);
    IntegrabilityVerdict { integrable: witness.is_none(), gram_matrix_real: m, leading_minors: minors, witness }
}

/// Moments `∬ xⁱ yʲ exp(−zᵀAz − Lᵀz) dz` for `i + j ≤ max_degree`, `A` complex
/// symmetric with positive-definite real part.
struct MomentTable {
    stride: usize,
    values: Vec<Complex64>,
}

impl MomentTable {
    fn build(a: [[Complex64; 2]; 2], l: [Complex64; 2], max_degree: usize) -> Self {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        // product of principal roots of the eigenvalues: the branch continuous
        // from the real positive-definite case
        let half_tr = (a[0][0] + a[1][1]) * 0.5;
        let disc = ((a[0][0] - a[1][1]) * 0.5).powu(2) + a[0][1] * a[1][0];
        let root = disc.sqrt();
        let sqrt_det = (half_tr + root).sqrt() * (half_tr - root).sqrt();
        let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        let quad = l[0] * (inv[0][0] * l[0] + inv[0][1] * l[1]) + l[1] * (inv[1][0] * l[0] + inv[1][1] * l[1]);
        let base = Complex64::new(PI, 0.0) / sqrt_det * (quad * 0.25).exp();
        // S = (2A)^{-1}
        let s = [[inv[0][0] * 0.5, inv[0][1] * 0.5], [inv[1][0] * 0.5, inv[1][1] * 0.5]];

        let stride = max_degree + 2;
        let mut values = vec![ZERO; stride * stride];
        values[0] = base;
        let at = |v: &Vec<Complex64>, i: usize, j: usize| v[i * stride + j];
        for n in 0..max_degree {
            for i in 0..=n {
                let j = n - i;
                let cur = at(&values, i, j);
                let rx = if i > 0 { at(&values, i - 1, j) * i as f64 } else { ZERO } - l[0] * cur;
                let ry = if j > 0 { at(&values, i, j - 1) * j as f64 } else { ZERO } - l[1] * cur;
                values[(i + 1) * stride + j] = s[0][0] * rx + s[0][1] * ry;
                if i == 0 {
                    values[j + 1] = s[1][0] * rx + s[1][1] * ry;
                }
            }
        }
        Self { stride, values }
    }

    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.stride + j]
    }
}

/// `⟨f, g⟩ = ∬ conj(f)·g·exp(−c1·x² − c2·y²) dx dy`, evaluated in closed form.
///
/// Fails with [`GaussianError::DivergentIntegral`] when the real part of the
/// combined quadratic form is not positive definite; `borderline` is set when
/// its determinant is within [`tol::DEGENERATE_DET`] of zero.
pub fn inner_product(f: &GaussianPolynomial, g: &GaussianPolynomial, space: &WeightedSpace) -> Result<Complex64, GaussianError> {
    let qf = f.exponent().conj();
    let qg = g.exponent();
    let k1 = qf.k1 + qg.k1 + space.c1;
    let k2 = qf.k2 + qg.k2 + space.c2;
    let h = (qf.k3 + qg.k3) * 0.5;
    let a = [[k1, h], [h, k2]];
    let re = [[k1.re, h.re], [h.re, k2.re]];
    let (minors, witness) = sylvester(re);
    if minors[1].abs() <= tol::DEGENERATE_DET {
        return Err(GaussianError::DivergentIntegral { borderline: true, minors });
    }
    if witness.is_some() {
        return Err(GaussianError::DivergentIntegral { borderline: false, minors });
    }
    let l = [qf.l1 + qg.l1, qf.l2 + qg.l2];

    let degree = f.degree() + g.degree();
    let moments = MomentTable::build(a, l, degree);
    let mut acc = ZERO;
    for (i1, j1, cf) in f.monomials() {
        if cf == ZERO {
            continue;
        }
        let cf = cf.conj();
        for (i2, j2, cg) in g.monomials() {
            if cg != ZERO {
                acc += cf * cg * moments.get(i1 + i2, j1 + j2);
            }
        }
    }
    Ok(acc)
}
