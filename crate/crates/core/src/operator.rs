//! First-order differential operators in two variables.
//!
//! Every operator handled here has the normal form
//! `cx·x + cy·y + dx·∂x + dy·∂y + e·1`. The class is closed under linear
//! combination and adjoints (also in Gaussian-weighted spaces), and the
//! commutator of two members is always a multiple of the identity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::gaussian::{GaussianError, GaussianPolynomial};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `cx·x + cy·y + dx·∂x + dy·∂y + e·1` with complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FirstOrderOperator {
    pub cx: Complex64,
    pub cy: Complex64,
    pub dx: Complex64,
    pub dy: Complex64,
    pub e: Complex64,
}

impl FirstOrderOperator {
    pub const fn new(cx: Complex64, cy: Complex64, dx: Complex64, dy: Complex64, e: Complex64) -> Self {
        Self { cx, cy, dx, dy, e }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO, ONE)
    }

    /// Multiplication by `x`.
    pub const fn x() -> Self {
        Self::new(ONE, ZERO, ZERO, ZERO, ZERO)
    }

    /// Multiplication by `y`.
    pub const fn y() -> Self {
        Self::new(ZERO, ONE, ZERO, ZERO, ZERO)
    }

    /// `∂/∂x`.
    pub const fn d_x() -> Self {
        Self::new(ZERO, ZERO, ONE, ZERO, ZERO)
    }

    /// `∂/∂y`.
    pub const fn d_y() -> Self {
        Self::new(ZERO, ZERO, ZERO, ONE, ZERO)
    }

    pub fn coefficients(&self) -> [Complex64; 5] {
        [self.cx, self.cy, self.dx, self.dy, self.e]
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coefficients().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// True when the operator has no derivative part.
    pub fn is_multiplication(&self) -> bool {
        self.dx == ZERO && self.dy == ZERO
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.cx * s, self.cy * s, self.dx * s, self.dy * s, self.e * s)
    }
}

impl Add for FirstOrderOperator {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.cx + o.cx, self.cy + o.cy, self.dx + o.dx, self.dy + o.dy, self.e + o.e)
    }
}

impl Sub for FirstOrderOperator {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.cx - o.cx, self.cy - o.cy, self.dx - o.dx, self.dy - o.dy, self.e - o.e)
    }
}

impl Neg for FirstOrderOperator {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<FirstOrderOperator> for Complex64 {
    type Output = FirstOrderOperator;
    fn mul(self, op: FirstOrderOperator) -> FirstOrderOperator {
        op.scale(self)
    }
}

impl Mul<FirstOrderOperator> for f64 {
    type Output = FirstOrderOperator;
    fn mul(self, op: FirstOrderOperator) -> FirstOrderOperator {
        op.scale(Complex64::new(self, 0.0))
    }
}

impl fmt::Display for FirstOrderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})·x + ({})·y + ({})·∂x + ({})·∂y + ({})",
            self.cx, self.cy, self.dx, self.dy, self.e
        )
    }
}

/// The Hilbert space `L²(ℝ², exp(−c1·x² − c2·y²) dx dy)`.
///
/// `c1 = c2 = 0` is plain `L²(ℝ²)`. Negative weights are admitted: they are
/// still meaningful on the Gaussian states whenever the integrals converge.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedSpace {
    pub c1: f64,
    pub c2: f64,
}

impl WeightedSpace {
    pub const L2: WeightedSpace = WeightedSpace { c1: 0.0, c2: 0.0 };

    pub fn new(c1: f64, c2: f64) -> Self {
        assert!(c1.is_finite() && c2.is_finite(), "weight constants must be finite");
        Self { c1, c2 }
    }

    pub fn is_l2(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0
    }
}

/// Scalar `s` with `[a, b] = s·1`.
pub fn commutator(a: &FirstOrderOperator, b: &FirstOrderOperator) -> Complex64 {
    a.dx * b.cx + a.dy * b.cy - b.dx * a.cx - b.dy * a.cy
}

/// Adjoint with respect to the inner product of `space`.
///
/// Uses `x* = x`, `y* = y`, `∂x* = −∂x + 2c1·x`, `∂y* = −∂y + 2c2·y`.
pub fn adjoint(a: &FirstOrderOperator, space: &WeightedSpace) -> FirstOrderOperator {
    let dx = a.dx.conj();
    let dy = a.dy.conj();
    FirstOrderOperator::new(
        a.cx.conj() + 2.0 * space.c1 * dx,
        a.cy.conj() + 2.0 * space.c2 * dy,
        -dx,
        -dy,
        a.e.conj(),
    )
}

/// One product term `coefficient · f_1 f_2 … f_n` (rightmost factor acts first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Complex64,
    pub factors: Vec<FirstOrderOperator>,
}

/// Finite sum of finite products of first-order operators.
///
/// Not normal-ordered: application evaluates each product factor by factor.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OperatorExpression {
    pub terms: Vec<Term>,
}

impl OperatorExpression {
    pub fn identity() -> Self {
        Self::single(FirstOrderOperator::identity())
    }

    pub fn single(op: FirstOrderOperator) -> Self {
        Self::product(ONE, vec![op])
    }

    /// `coefficient · factors[0] · factors[1] · …`.
    ///
    /// # Panics
    /// If `factors` is empty.
    pub fn product(coefficient: Complex64, factors: Vec<FirstOrderOperator>) -> Self {
        assert!(!factors.is_empty(), "a product term needs at least one factor");
        Self { terms: vec![Term { coefficient, factors }] }
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        for t in &mut self.terms {
            t.coefficient *= s;
        }
        self
    }

    pub fn plus(mut self, other: OperatorExpression) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// Adjoint in `space`: factors reversed and individually adjoined.
    pub fn adjoint(&self, space: &WeightedSpace) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coefficient: t.coefficient.conj(),
                factors: t.factors.iter().rev().map(|f| adjoint(f, space)).collect(),
            })
            .collect();
        Self { terms }
    }

    /// Apply to a state: `Σ c_t · f_1(f_2(…f_n(state)))`.
    pub fn apply(&self, state: &GaussianPolynomial) -> Result<GaussianPolynomial, GaussianError> {
        let mut acc = GaussianPolynomial::zero_like(state);
        for term in &self.terms {
            let mut s = state.clone();
            for op in term.factors.iter().rev() {
                s = s.apply(op)?;
            }
            acc = acc.add(&s.scale(term.coefficient))?;
        }
        Ok(acc)
    }
}

/// `a ∘ b`: every product of `a` followed by every product of `b`.
pub fn compose(a: &OperatorExpression, b: &OperatorExpression) -> OperatorExpression {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for ta in &a.terms {
        for tb in &b.terms {
            let mut factors = ta.factors.clone();
            factors.extend_from_slice(&tb.factors);
            terms.push(Term { coefficient: ta.coefficient * tb.coefficient, factors });
        }
    }
    OperatorExpression { terms }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub name: String,
    pub value: Complex64,
    pub target: Complex64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityCheck {
    pub name: String,
    pub max_coefficient_diff: f64,
    pub passed: bool,
}

/// Outcome of [`check_pseudo_boson_ccr`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcrReport {
    pub tolerance: f64,
    pub commutators: Vec<CommutatorCheck>,
    pub compatibility: Vec<CompatibilityCheck>,
}

impl CcrReport {
    pub fn commutators_pass(&self) -> bool {
        self.commutators.iter().all(|c| c.passed)
    }

    pub fn compatibility_pass(&self) -> bool {
        self.compatibility.iter().all(|c| c.passed)
    }

    pub fn all_pass(&self) -> bool {
        self.commutators_pass() && self.compatibility_pass()
    }

    pub fn max_commutator_residual(&self) -> f64 {
        self.commutators.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn max_compatibility_diff(&self) -> f64 {
        self.compatibility.iter().map(|c| c.max_coefficient_diff).fold(0.0, f64::max)
    }
}

/// Checks the six pseudo-bosonic commutation targets and the two
/// compatibility relations `b₊ = a₋†`, `b₋ = a₊†` in `L²(ℝ²)`.
pub fn check_pseudo_boson_ccr(
    a_plus: &FirstOrderOperator,
    a_minus: &FirstOrderOperator,
    b_plus: &FirstOrderOperator,
    b_minus: &FirstOrderOperator,
    tol: f64,
) -> CcrReport {
    assert!(tol > 0.0, "tolerance must be positive");
    let cases: [(&str, &FirstOrderOperator, &FirstOrderOperator, f64); 6] = [
        ("[a+,b+]", a_plus, b_plus, 1.0),
        ("[a-,b-]", a_minus, b_minus, 1.0),
        ("[a+,a-]", a_plus, a_minus, 0.0),
        ("[a+,b-]", a_plus, b_minus, 0.0),
        ("[a-,b+]", a_minus, b_plus, 0.0),
        ("[b+,b-]", b_plus, b_minus, 0.0),
    ];
    let commutators = cases
        .iter()
        .map(|&(name, a, b, target)| {
            let value = commutator(a, b);
            let target = Complex64::new(target, 0.0);
            let residual = (value - target).norm();
            CommutatorCheck { name: name.to_string(), value, target, residual, passed: residual <= tol }
        })
        .collect();

    let compat = |name: &str, b: &FirstOrderOperator, a: &FirstOrderOperator| {
        let diff = b.max_diff(&adjoint(a, &WeightedSpace::L2));
        CompatibilityCheck { name: name.to_string(), max_coefficient_diff: diff, passed: diff <= tol }
    };
    let compatibility = vec![compat("b+ = a-^dag", b_plus, a_minus), compat("b- = a+^dag", b_minus, a_plus)];

    CcrReport { tolerance: tol, commutators, compatibility }
}
