//! The quantum damped harmonic oscillator in pseudo-bosonic form.
//!
//! From mass `m`, damping `γ` and stiffness `k` we get
//! `Ω = √((k − γ²/4m)/m)` and `ω± = Ω ± iγ/2m`. A representation is fixed by
//! two complex numbers `Γ`, `δ` with `D = Γ·conj(δ) − δ·conj(Γ) ≠ 0`, which
//! define `α = conj(Γ)/D` and `β = conj(δ)/D`. The phase-space operators are
//!
//! ```text
//! x₊ = β·x − iα·∂y      p₊ = −iΓ·∂x + δ·y
//! x₋ = conj(β)·x − i·conj(α)·∂y      p₋ = −i·conj(Γ)·∂x + conj(δ)·y
//! ```
//!
//! and the ladder operators `a± = √(ω±/2)(x± + i p±/ω±)`,
//! `b± = √(ω±/2)(x± − i p±/ω±)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{adjoint, compose, FirstOrderOperator, OperatorExpression, WeightedSpace};
use crate::tol;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum ModelError {
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("stiffness must be positive and finite, got {0}")]
    InvalidStiffness(f64),
    #[error("damping must be non-negative and finite, got {0}")]
    InvalidDamping(f64),
    #[error("overdamped: k = {k} < gamma^2/(4m) = {threshold}, so Omega is not real")]
    Overdamped { k: f64, threshold: f64 },
    #[error("degenerate representation: Gamma*conj(delta) - delta*conj(Gamma) = {det}")]
    DegenerateParams { det: Complex64 },
    #[error("non-finite representation coefficient")]
    NonFinite,
    #[error("the two ladder-operator constructions disagree by {max_diff:e}")]
    ConstructionMismatch { max_diff: f64 },
}

/// Physical and representation parameters with all derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub m: f64,
    pub gamma: f64,
    pub k: f64,
    /// Representation coefficient `Γ` (upper-case in the usual notation).
    pub big_gamma: Complex64,
    pub delta: Complex64,
    pub omega: f64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    /// `Γ·conj(δ) − δ·conj(Γ)`, purely imaginary.
    pub det: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Builds and validates [`ModelParams`].
pub fn build_params(m: f64, gamma: f64, k: f64, big_gamma: Complex64, delta: Complex64) -> Result<ModelParams, ModelError> {
    if !(m.is_finite() && m > 0.0) {
        return Err(ModelError::InvalidMass(m));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(ModelError::InvalidStiffness(k));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(ModelError::InvalidDamping(gamma));
    }
    if ![big_gamma.re, big_gamma.im, delta.re, delta.im].iter().all(|v| v.is_finite()) {
        return Err(ModelError::NonFinite);
    }
    let threshold = gamma * gamma / (4.0 * m);
    if k < threshold {
        return Err(ModelError::Overdamped { k, threshold });
    }
    let det = big_gamma * delta.conj() - delta * big_gamma.conj();
    if det.norm() <= tol::ALG * 1.0f64.max(big_gamma.norm() * delta.norm()) {
        return Err(ModelError::DegenerateParams { det });
    }
    let omega = ((k - threshold) / m).sqrt();
    let damping = gamma / (2.0 * m);
    Ok(ModelParams {
        m,
        gamma,
        k,
        big_gamma,
        delta,
        omega,
        omega_plus: Complex64::new(omega, damping),
        omega_minus: Complex64::new(omega, -damping),
        det,
        alpha: big_gamma.conj() / det,
        beta: delta.conj() / det,
    })
}

impl ModelParams {
    /// `(ω₊ + ω₋)/2`, the vacuum energy.
    pub fn vacuum_energy(&self) -> Complex64 {
        (self.omega_plus + self.omega_minus) * 0.5
    }
}

/// `x±`, `p±` as first-order operators in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpace {
    pub x_plus: FirstOrderOperator,
    pub x_minus: FirstOrderOperator,
    pub p_plus: FirstOrderOperator,
    pub p_minus: FirstOrderOperator,
}

/// Phase-space operators with `p_x = −i∂x`, `p_y = −i∂y`.
pub fn build_phase_space(params: &ModelParams) -> PhaseSpace {
    let d = params.det;
    let (g, dl) = (params.big_gamma, params.delta);
    let px = -I * FirstOrderOperator::d_x();
    let py = -I * FirstOrderOperator::d_y();
    let x = FirstOrderOperator::x();
    let y = FirstOrderOperator::y();
    PhaseSpace {
        x_plus: (g.conj() / d) * py + (dl.conj() / d) * x,
        x_minus: (-g / d) * py + (-dl / d) * x,
        p_plus: g * px + dl * y,
        p_minus: g.conj() * px + dl.conj() * y,
    }
}

/// The two lowering and two raising operators of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoBosonQuad {
    pub a_plus: FirstOrderOperator,
    pub a_minus: FirstOrderOperator,
    pub b_plus: FirstOrderOperator,
    pub b_minus: FirstOrderOperator,
    pub params: ModelParams,
}

impl PseudoBosonQuad {
    pub fn operators(&self) -> [FirstOrderOperator; 4] {
        [self.a_plus, self.a_minus, self.b_plus, self.b_minus]
    }
}

/// Ladder operators from the phase-space operators.
pub fn ladder_from_phase_space(params: &ModelParams, ps: &PhaseSpace) -> [FirstOrderOperator; 4] {
    let (wp, wm) = (params.omega_plus, params.omega_minus);
    let sp = (wp * 0.5).sqrt();
    let sm = (wm * 0.5).sqrt();
    [
        sp * (ps.x_plus + (I / wp) * ps.p_plus),
        sm * (ps.x_minus + (I / wm) * ps.p_minus),
        sp * (ps.x_plus - (I / wp) * ps.p_plus),
        sm * (ps.x_minus - (I / wm) * ps.p_minus),
    ]
}

/// Ladder operators written directly in terms of `(α, β, Γ, δ, ω±)`:
///
/// ```text
/// a₊ = √(ω₊/2)·[β·x + iδ/ω₊·y + Γ/ω₊·∂x − iα·∂y]
/// b₊ = √(ω₊/2)·[β·x − iδ/ω₊·y − Γ/ω₊·∂x − iα·∂y]
/// ```
///
/// and `a₋`, `b₋` with every representation coefficient conjugated and `ω₊ → ω₋`.
/// `α` and `β` are taken as arguments so callers can perturb them.
pub fn ladder_direct(params: &ModelParams, alpha: Complex64, beta: Complex64) -> [FirstOrderOperator; 4] {
    let one = |w: Complex64, a: Complex64, b: Complex64, g: Complex64, d: Complex64, sign: f64| {
        let s = (w * 0.5).sqrt();
        s * FirstOrderOperator::new(b, sign * I * d / w, sign * g / w, -I * a, ZERO)
    };
    let (wp, wm) = (params.omega_plus, params.omega_minus);
    let (g, d) = (params.big_gamma, params.delta);
    [
        one(wp, alpha, beta, g, d, 1.0),
        one(wm, alpha.conj(), beta.conj(), g.conj(), d.conj(), 1.0),
        one(wp, alpha, beta, g, d, -1.0),
        one(wm, alpha.conj(), beta.conj(), g.conj(), d.conj(), -1.0),
    ]
}

/// Builds the ladder operators by both routes and insists they agree.
pub fn build_pseudo_bosons(params: &ModelParams) -> Result<PseudoBosonQuad, ModelError> {
    let via_phase_space = ladder_from_phase_space(params, &build_phase_space(params));
    let direct = ladder_direct(params, params.alpha, params.beta);
    let max_diff = via_phase_space
        .iter()
        .zip(&direct)
        .map(|(a, b)| a.max_diff(b))
        .fold(0.0, f64::max);
    if max_diff > tol::ALG {
        return Err(ModelError::ConstructionMismatch { max_diff });
    }
    let [a_plus, a_minus, b_plus, b_minus] = via_phase_space;
    Ok(PseudoBosonQuad { a_plus, a_minus, b_plus, b_minus, params: *params })
}

/// Largest coefficient difference between the two ladder constructions.
pub fn construction_disagreement(params: &ModelParams) -> f64 {
    let a = ladder_from_phase_space(params, &build_phase_space(params));
    let b = ladder_direct(params, params.alpha, params.beta);
    a.iter().zip(&b).map(|(x, y)| x.max_diff(y)).fold(0.0, f64::max)
}

/// `N± = b±·a±`.
pub fn number_operators(quad: &PseudoBosonQuad) -> (OperatorExpression, OperatorExpression) {
    (
        compose(&OperatorExpression::single(quad.b_plus), &OperatorExpression::single(quad.a_plus)),
        compose(&OperatorExpression::single(quad.b_minus), &OperatorExpression::single(quad.a_minus)),
    )
}

/// `H = ω₊N₊ + ω₋N₋ + ((ω₊ + ω₋)/2)·1`.
pub fn build_hamiltonian(quad: &PseudoBosonQuad) -> OperatorExpression {
    let p = &quad.params;
    let (n_plus, n_minus) = number_operators(quad);
    n_plus
        .scaled(p.omega_plus)
        .plus(n_minus.scaled(p.omega_minus))
        .plus(OperatorExpression::identity().scaled(p.vacuum_energy()))
}

/// Adjoints of the four ladder operators in a weighted space, together with
/// the closed forms `X* = Y + correction` they are usually quoted in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedAdjoints {
    pub space: WeightedSpace,
    pub a_plus_star: FirstOrderOperator,
    pub a_minus_star: FirstOrderOperator,
    pub b_plus_star: FirstOrderOperator,
    pub b_minus_star: FirstOrderOperator,
    /// Quoted closed forms, in the order `a₊*, a₋*, b₊*, b₋*`. The quoted
    /// `b₋*` carries `conj(Γ)/ω₋` in its `c1` term.
    pub quoted: [FirstOrderOperator; 4],
    /// Coefficient-wise distance between each derived adjoint and its quoted form.
    pub quoted_diff: [f64; 4],
    /// Closed forms re-derived by hand; `b₋*` uses `Γ/ω₊` in its `c1` term.
    pub corrected: [FirstOrderOperator; 4],
    pub corrected_diff: [f64; 4],
}

impl WeightedAdjoints {
    pub fn derived(&self) -> [FirstOrderOperator; 4] {
        [self.a_plus_star, self.a_minus_star, self.b_plus_star, self.b_minus_star]
    }
}

/// Closed-form weighted adjoints; `quoted_b_minus` selects the quoted (flawed)
/// `c1` coefficient of `b₋*`.
fn closed_form_adjoints(quad: &PseudoBosonQuad, space: &WeightedSpace, quoted_b_minus: bool) -> [FirstOrderOperator; 4] {
    let p = &quad.params;
    let (wp, wm) = (p.omega_plus, p.omega_minus);
    let (g, a) = (p.big_gamma, p.alpha);
    let (c1, c2) = (space.c1, space.c2);
    let x = FirstOrderOperator::x();
    let y = FirstOrderOperator::y();
    let rp = (wp * 2.0).sqrt();
    let rm = (wm * 2.0).sqrt();
    let b_minus_x = if quoted_b_minus { g.conj() / wm } else { g / wp };
    [
        quad.b_minus + rm * ((c1 * g.conj() / wm) * x + (I * c2 * a.conj()) * y),
        quad.b_plus + rp * ((c1 * g / wp) * x + (I * c2 * a) * y),
        quad.a_minus + rm * ((-c1 * g.conj() / wm) * x + (I * c2 * a.conj()) * y),
        quad.a_plus + rp * ((-c1 * b_minus_x) * x + (I * c2 * a) * y),
    ]
}

/// Adjoints of `a±`, `b±` in `space`, compared against their closed forms.
pub fn weighted_adjoint_quad(quad: &PseudoBosonQuad, space: &WeightedSpace) -> WeightedAdjoints {
    let derived = [
        adjoint(&quad.a_plus, space),
        adjoint(&quad.a_minus, space),
        adjoint(&quad.b_plus, space),
        adjoint(&quad.b_minus, space),
    ];
    let quoted = closed_form_adjoints(quad, space, true);
    let corrected = closed_form_adjoints(quad, space, false);
    let diff = |forms: &[FirstOrderOperator; 4]| {
        let mut out = [0.0; 4];
        for (o, (d, f)) in out.iter_mut().zip(derived.iter().zip(forms)) {
            *o = d.max_diff(f);
        }
        out
    };
    WeightedAdjoints {
        space: *space,
        a_plus_star: derived[0],
        a_minus_star: derived[1],
        b_plus_star: derived[2],
        b_minus_star: derived[3],
        quoted_diff: diff(&quoted),
        quoted,
        corrected_diff: diff(&corrected),
        corrected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{check_pseudo_boson_ccr, commutator};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn undamped_frequencies() {
        let p = build_params(1.0, 0.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(p.omega, 1.0);
        assert_eq!(p.omega_plus, c(1.0, 0.0));
        assert_eq!(p.omega_minus, c(1.0, 0.0));
        assert!((p.alpha - c(0.0, 0.5)).norm() < 1e-15);
        assert!((p.beta - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn damped_frequencies() {
        let p = build_params(1.0, 1.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((p.omega - h).abs() < 1e-15);
        assert!((p.omega_plus - c(h, 0.5)).norm() < 1e-15);
        assert!((p.omega_minus - c(h, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_and_overdamped() {
        assert!(matches!(
            build_params(1.0, 1.0, 1.0, c(1.0, 0.0), c(1.0, 0.0)),
            Err(ModelError::DegenerateParams { .. })
        ));
        assert!(matches!(
            build_params(1.0, 3.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)),
            Err(ModelError::Overdamped { .. })
        ));
        assert!(matches!(build_params(0.0, 0.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)), Err(ModelError::InvalidMass(_))));
        // critical damping is allowed
        assert!(build_params(1.0, 2.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn x_plus_table_for_unit_gamma_and_imaginary_delta() {
        // D = 1·(−i) − i·1 = −2i; x₊ = (p_y + (−i)·x)/(−2i) with p_y = −i∂y
        let p = build_params(1.0, 0.3, 1.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let ps = build_phase_space(&p);
        let d = c(0.0, -2.0);
        let expect_cx = c(0.0, -1.0) / d; // conj(δ)/D = 1/2
        let expect_dy = (c(1.0, 0.0) / d) * c(0.0, -1.0); // conj(Γ)/D · (−i) = (i/2)(−i) = 1/2
        assert!((ps.x_plus.cx - expect_cx).norm() < 1e-15);
        assert!((ps.x_plus.dy - expect_dy).norm() < 1e-15);
        assert!((ps.x_plus.cx - c(0.5, 0.0)).norm() < 1e-15);
        assert!((ps.x_plus.dy - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(ps.x_plus.cy, c(0.0, 0.0));
        assert_eq!(ps.x_plus.dx, c(0.0, 0.0));
    }

    #[test]
    fn phase_space_relations() {
        let p = build_params(1.3, 0.8, 2.0, c(0.7, -1.1), c(1.4, 0.2)).unwrap();
        let ps = build_phase_space(&p);
        assert!((commutator(&ps.x_plus, &ps.p_plus) - I).norm() < tol::ALG);
        assert!((commutator(&ps.x_minus, &ps.p_minus) - I).norm() < tol::ALG);
        for (a, b) in [
            (ps.x_plus, ps.p_minus),
            (ps.x_minus, ps.p_plus),
            (ps.x_plus, ps.x_minus),
            (ps.p_plus, ps.p_minus),
        ] {
            assert!(commutator(&a, &b).norm() < tol::ALG);
        }
        assert!(adjoint(&ps.x_plus, &WeightedSpace::L2).approx_eq(&ps.x_minus, tol::ALG));
        assert!(adjoint(&ps.p_plus, &WeightedSpace::L2).approx_eq(&ps.p_minus, tol::ALG));
    }

    #[test]
    fn ladder_operators_are_pseudo_bosons() {
        let p = build_params(0.9, 0.5, 1.7, c(-0.3, 1.2), c(0.8, 0.6)).unwrap();
        let q = build_pseudo_bosons(&p).unwrap();
        let rep = check_pseudo_boson_ccr(&q.a_plus, &q.a_minus, &q.b_plus, &q.b_minus, tol::ALG);
        assert!(rep.all_pass(), "{rep:?}");
        assert!(construction_disagreement(&p) < 1e-14);
    }

    #[test]
    fn perturbed_alpha_breaks_ccr() {
        let p = build_params(0.9, 0.5, 1.7, c(-0.3, 1.2), c(0.8, 0.6)).unwrap();
        let [ap, am, bp, bm] = ladder_direct(&p, p.alpha + 1e-3, p.beta);
        // [a+, b+] = βΓ − α'δ = 1 − 1e-3·δ
        let s = commutator(&ap, &bp);
        assert!((s - (c(1.0, 0.0) - p.delta * 1e-3)).norm() < 1e-12);
        let rep = check_pseudo_boson_ccr(&ap, &am, &bp, &bm, 1e-6);
        assert!(!rep.commutators[0].passed);
    }

    #[test]
    fn undamped_limit_gives_conjugate_pair() {
        let p = build_params(1.0, 0.0, 1.0, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let q = build_pseudo_bosons(&p).unwrap();
        // a₊ = (1/√2)(x/2 − y + ∂x + ∂y/2), a₋ = (1/√2)(x/2 + y + ∂x − ∂y/2)
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ap = FirstOrderOperator::new(c(0.5 * r, 0.0), c(-r, 0.0), c(r, 0.0), c(0.5 * r, 0.0), ZERO);
        let am = FirstOrderOperator::new(c(0.5 * r, 0.0), c(r, 0.0), c(r, 0.0), c(-0.5 * r, 0.0), ZERO);
        assert!(q.a_plus.approx_eq(&ap, 1e-15), "{}", q.a_plus);
        assert!(q.a_minus.approx_eq(&am, 1e-15), "{}", q.a_minus);
    }

    #[test]
    fn weighted_adjoints_reduce_in_l2() {
        let p = build_params(1.0, 1.0, 1.0, c(0.2, 1.0), c(1.0, 0.0)).unwrap();
        let q = build_pseudo_bosons(&p).unwrap();
        let w = weighted_adjoint_quad(&q, &WeightedSpace::L2);
        assert!(w.a_plus_star.approx_eq(&q.b_minus, tol::ALG));
        assert!(w.a_minus_star.approx_eq(&q.b_plus, tol::ALG));
        assert!(w.b_plus_star.approx_eq(&q.a_minus, tol::ALG));
        assert!(w.b_minus_star.approx_eq(&q.a_plus, tol::ALG));
    }

    #[test]
    fn weighted_adjoints_against_closed_forms() {
        let p = build_params(1.0, 1.0, 1.0, c(0.2, 1.0), c(1.0, 0.0)).unwrap();
        let q = build_pseudo_bosons(&p).unwrap();
        let s = WeightedSpace::new(0.4, 0.9);
        let w = weighted_adjoint_quad(&q, &s);
        assert!(!w.a_plus_star.approx_eq(&q.b_minus, 1e-3));
        for d in &w.quoted_diff[..3] {
            assert!(*d < tol::ALG, "{:?}", w.quoted_diff);
        }
        assert!(w.quoted_diff[3] > 1e-3);
        for d in &w.corrected_diff {
            assert!(*d < tol::ALG, "{:?}", w.corrected_diff);
        }
        // a₊* − b₋ = √(2ω₋)(c1·conj(Γ)/ω₋·x + i·c2·conj(α)·y)
        let delta = w.a_plus_star - q.b_minus;
        let rm = (p.omega_minus * 2.0).sqrt();
        assert!((delta.cx - rm * 0.4 * p.big_gamma.conj() / p.omega_minus).norm() < tol::ALG);
        assert!((delta.cy - rm * I * 0.9 * p.alpha.conj()).norm() < tol::ALG);
        assert!(delta.dx.norm() < tol::ALG && delta.dy.norm() < tol::ALG);
    }
}
