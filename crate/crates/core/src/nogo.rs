//! Certificates that the damped oscillator admits no pair of normalisable vacua.
//!
//! Three obstructions are checked:
//!
//! * the sign obstruction in `L²(ℝ²)`: with `u = βω₊/Γ`, `v = δ/(αω₊)` the
//!   vacuum `exp(−u/2·x² + v/2·y²)` is normalisable iff `u > 0` and `v < 0`,
//!   but `u·v = |δ/Γ|² > 0`;
//! * the weighted-space obstruction: the conditions for `φ₀₀` and `Ψ₀₀` to lie
//!   in `L²(exp(−c1x² − c2y²))` can never hold together;
//! * the general first-order ansatz: any `a±` satisfying the pseudo-bosonic
//!   commutation rules with `b± = a∓†` has only non-normalisable Gaussian vacua.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::Rng;
use rand_distr_free::standard_normal;

use crate::gaussian::{integrability_check, GaussianPolynomial, QuadraticForm};
use crate::operator::{adjoint, check_pseudo_boson_ccr, commutator, FirstOrderOperator, WeightedSpace};
use crate::qdho::{build_pseudo_bosons, ModelParams};
use crate::sampling::{random_params, random_ratio_params, sample_rng};
use crate::tol;
use crate::vacuum::{ratio_condition_defect, solve_vacuum, VacuumAnsatz};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum NogoError {
    #[error("ratio condition violated (defect {defect:e}); u and v are not guaranteed real")]
    Precondition { defect: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn require_ratio(params: &ModelParams) -> Result<(), NogoError> {
    let defect = ratio_condition_defect(params).map(|d| d.norm()).unwrap_or(f64::INFINITY);
    if defect > tol::ALG {
        return Err(NogoError::Precondition { defect });
    }
    Ok(())
}

/// `(βω₊/Γ, δ/(αω₊))` as complex numbers.
fn exponent_coefficients(p: &ModelParams) -> (Complex64, Complex64) {
    (p.beta * p.omega_plus / p.big_gamma, p.delta / (p.alpha * p.omega_plus))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignObstructionCertificate {
    /// `Re(βω₊/Γ)`; the vacuum decays in `x` iff `u > 0`.
    pub u: f64,
    /// `Re(δ/(αω₊))`; the vacuum decays in `y` iff `v < 0`.
    pub v: f64,
    /// `|Im u|`, `|Im v|`, each relative to `max(1, |·|)`.
    pub imag_residuals: [f64; 2],
    /// `|u·v − |δ/Γ|²|`.
    pub product_identity_defect: f64,
    /// `|u·v − |δ/γ|²|` with the damping constant `γ`; `None` when `γ = 0`.
    pub damping_product_defect: Option<f64>,
    /// `φ₀₀ ∈ L²(ℝ²)` by direct Sylvester check.
    pub vacuum_integrable: bool,
    /// `u·v > 0`, so `u > 0 ∧ v < 0` is impossible.
    pub verdict: bool,
}

pub fn sign_obstruction(params: &ModelParams) -> Result<SignObstructionCertificate, NogoError> {
    require_ratio(params)?;
    let (uc, vc) = exponent_coefficients(params);
    let (u, v) = (uc.re, vc.re);
    let rel_im = |z: Complex64| z.im.abs() / 1.0f64.max(z.norm());
    let target = (params.delta / params.big_gamma).norm_sqr();
    let damping_product_defect = if params.gamma > 0.0 {
        Some((u * v - (params.delta.norm() / params.gamma).powi(2)).abs())
    } else {
        None
    };
    let q = QuadraticForm::real(u / 2.0, -v / 2.0, 0.0);
    let vacuum_integrable = integrability_check(&GaussianPolynomial::gaussian(q), &WeightedSpace::L2).integrable;
    Ok(SignObstructionCertificate {
        u,
        v,
        imag_residuals: [rel_im(uc), rel_im(vc)],
        product_identity_defect: (u * v - target).abs(),
        damping_product_defect,
        vacuum_integrable,
        verdict: u * v > 0.0,
    })
}

/// Condition for `φ₀₀` to be normalisable in the weighted space `(c1, c2)`.
pub fn phi_condition(u: f64, v: f64, c1: f64, c2: f64) -> bool {
    c1 + u > 0.0 && c2 - v > 0.0
}

/// Condition for `Ψ₀₀ = φ₀₀·exp(c1x² + c2y²)` to be normalisable in `(c1, c2)`.
pub fn psi_condition(u: f64, v: f64, c1: f64, c2: f64) -> bool {
    u - c1 > 0.0 && c2 + v < 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedFeasibilityReport {
    pub params: ModelParams,
    pub u: f64,
    pub v: f64,
    pub c_max: f64,
    pub n_grid: usize,
    /// Row `i` (`c1 = c_max·i/(n−1)`), column `j` (`c2 = c_max·j/(n−1)`): `'1'` where `φ₀₀` is normalisable.
    pub phi_mask: Vec<String>,
    /// Same layout for `Ψ₀₀`.
    pub psi_mask: Vec<String>,
    pub phi_points: usize,
    pub psi_points: usize,
    pub joint_points: usize,
    pub joint_feasible_found: bool,
    /// At `(0, 0)` the `φ₀₀` condition coincides with plain `L²` normalisability.
    pub origin_matches_l2: bool,
    /// Smallest `(c1, c2)` thresholds of the `φ₀₀` region on `c ≥ 0`: `(max(0, −u), max(0, v))`.
    pub phi_region_threshold: [f64; 2],
    /// `φ₀₀` region on `c ≥ 0` is never empty.
    pub phi_region_nonempty: bool,
    /// `Ψ₀₀` region on `c ≥ 0`: nonempty iff `u > 0 ∧ v < 0`.
    pub psi_region_nonempty_nonneg: bool,
    /// `Ψ₀₀` region over signed weights: `c1 < u`, `c2 < −v`, always nonempty.
    pub psi_region_nonempty_signed: bool,
    /// Exact contradiction derived from the two conditions, valid for all real `(c1, c2)`.
    pub analytic_certificate: Vec<String>,
    pub analytic_contradiction: bool,
}

pub fn weighted_infeasibility(params: &ModelParams, c_max: f64, n_grid: usize) -> Result<WeightedFeasibilityReport, NogoError> {
    require_ratio(params)?;
    if !(c_max > 0.0 && c_max.is_finite()) {
        return Err(NogoError::InvalidArgument(format!("c_max must be positive, got {c_max}")));
    }
    if n_grid < 2 {
        return Err(NogoError::InvalidArgument(format!("n_grid must be at least 2, got {n_grid}")));
    }
    let (uc, vc) = exponent_coefficients(params);
    let (u, v) = (uc.re, vc.re);

    let step = c_max / (n_grid - 1) as f64;
    let mut phi_mask = Vec::with_capacity(n_grid);
    let mut psi_mask = Vec::with_capacity(n_grid);
    let (mut phi_points, mut psi_points, mut joint_points) = (0, 0, 0);
    for i in 0..n_grid {
        let c1 = step * i as f64;
        let mut prow = String::with_capacity(n_grid);
        let mut srow = String::with_capacity(n_grid);
        for j in 0..n_grid {
            let c2 = step * j as f64;
            let a = phi_condition(u, v, c1, c2);
            let b = psi_condition(u, v, c1, c2);
            prow.push(if a { '1' } else { '0' });
            srow.push(if b { '1' } else { '0' });
            phi_points += a as usize;
            psi_points += b as usize;
            joint_points += (a && b) as usize;
        }
        phi_mask.push(prow);
        psi_mask.push(srow);
    }

    let l2 = integrability_check(
        &GaussianPolynomial::gaussian(QuadraticForm::real(u / 2.0, -v / 2.0, 0.0)),
        &WeightedSpace::L2,
    )
    .integrable;

    let uv = u * v;
    let analytic_contradiction = uv > 0.0;
    let analytic_certificate = vec![
        format!("u = {u:e}, v = {v:e}, u*v = {uv:e} (> 0: {})", uv > 0.0),
        "phi: c1 + u > 0 and c2 - v > 0;  psi: u - c1 > 0 and c2 + v < 0".to_string(),
        "c2 > v and c2 < -v  =>  v < -v  =>  v < 0".to_string(),
        "c1 > -u and c1 < u  =>  -u < u  =>  u > 0".to_string(),
        format!("u > 0 and v < 0 imply u*v < 0, contradicting u*v = {uv:e} > 0: no (c1, c2) in R^2 satisfies both"),
    ];

    Ok(WeightedFeasibilityReport {
        params: *params,
        u,
        v,
        c_max,
        n_grid,
        phi_mask,
        psi_mask,
        phi_points,
        psi_points,
        joint_points,
        joint_feasible_found: joint_points > 0,
        origin_matches_l2: phi_condition(u, v, 0.0, 0.0) == l2,
        phi_region_threshold: [(-u).max(0.0), v.max(0.0)],
        phi_region_nonempty: true,
        psi_region_nonempty_nonneg: u > 0.0 && v < 0.0,
        psi_region_nonempty_signed: true,
        analytic_certificate,
        analytic_contradiction,
    })
}

/// Search space for [`general_ansatz_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzMode {
    /// Derivative coefficients of `a±` restricted to real values.
    RealCoefficients,
    /// Vacuum exponent restricted to `k3² = 4·k1·k2`.
    K3Boundary,
    /// All coefficients complex.
    General,
    /// The damped-oscillator ladder operators for random parameters.
    ModelFamily,
}

impl std::str::FromStr for AnsatzMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "real" | "real-coefficients" => Ok(Self::RealCoefficients),
            "k3" | "k3-boundary" => Ok(Self::K3Boundary),
            "general" => Ok(Self::General),
            "model" | "model-family" => Ok(Self::ModelFamily),
            other => Err(format!("unknown ansatz mode '{other}' (expected real, k3, general or model)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchConclusion {
    NoSolutionConfirmed,
    SolutionCandidate,
}

/// A coefficient set that survived every check. Never produced by loosened tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub sample: u64,
    pub a_plus: FirstOrderOperator,
    pub a_minus: FirstOrderOperator,
    pub phi_vacuum: QuadraticForm,
    pub psi_vacuum: QuadraticForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSearchReport {
    pub mode: AnsatzMode,
    pub seed: u64,
    pub samples: u64,
    /// Samples projected onto the constraint set to within the algebraic tolerance.
    pub accepted: u64,
    pub rejected_projection: u64,
    /// Samples whose lowering operators have no derivative part.
    pub rejected_degenerate: u64,
    pub vacuum_failures: u64,
    pub phi_integrable: u64,
    pub psi_integrable: u64,
    pub both_integrable: u64,
    /// Largest constraint residual among accepted samples.
    pub max_constraint_residual: f64,
    /// Closest approach to normalisability: the smallest `max(0, −λ_min)` of the
    /// real Gram matrix of `φ₀₀` over accepted samples.
    pub best_residual: f64,
    pub candidates: Vec<Candidate>,
    pub conclusion: SearchConclusion,
}

/// Outcome of one sample.
#[derive(Debug, Clone)]
enum SampleOutcome {
    Degenerate,
    ProjectionFailed,
    VacuumFailed,
    Evaluated {
        residual: f64,
        phi_ok: bool,
        psi_ok: bool,
        gap: f64,
        candidate: Option<Box<Candidate>>,
    },
}

/// Unknowns: derivative coefficients `β = (βx, βy)` of `a₊`, `η = (ηx, ηy)` of
/// `a₋`, and the vacuum exponent `(k1, k2, k3)`. The multiplication parts
/// follow from `a± f₀₀ = 0`: `(αx, αy) = K·β` with `K = [[2k1, k3], [k3, 2k2]]`.
#[derive(Debug, Clone, Copy)]
struct AnsatzPoint {
    beta: [Complex64; 2],
    eta: [Complex64; 2],
    k: [Complex64; 3],
}

impl AnsatzPoint {
    fn lowering(&self, d: [Complex64; 2]) -> FirstOrderOperator {
        let [k1, k2, k3] = self.k;
        FirstOrderOperator::new(k1 * 2.0 * d[0] + k3 * d[1], k3 * d[0] + k2 * 2.0 * d[1], d[0], d[1], ZERO)
    }

    fn a_plus(&self) -> FirstOrderOperator {
        self.lowering(self.beta)
    }

    fn a_minus(&self) -> FirstOrderOperator {
        self.lowering(self.eta)
    }

    fn to_vec(self, mode: AnsatzMode) -> Vec<f64> {
        let mut v = Vec::with_capacity(14);
        for z in self.beta.iter().chain(&self.eta) {
            v.push(z.re);
            if mode != AnsatzMode::RealCoefficients {
                v.push(z.im);
            }
        }
        for z in &self.k {
            v.push(z.re);
            v.push(z.im);
        }
        v
    }

    fn from_vec(v: &[f64], mode: AnsatzMode) -> Self {
        let mut it = v.iter().copied();
        let mut next = |complex: bool| {
            let re = it.next().unwrap();
            let im = if complex { it.next().unwrap() } else { 0.0 };
            Complex64::new(re, im)
        };
        let c = mode != AnsatzMode::RealCoefficients;
        let beta = [next(c), next(c)];
        let eta = [next(c), next(c)];
        let k = [next(true), next(true), next(true)];
        Self { beta, eta, k }
    }
}

/// Commutation constraints with `b± = a∓†` (and `k3² = 4k1k2` in boundary mode), as a real vector.
fn constraints(p: &AnsatzPoint, mode: AnsatzMode) -> Vec<f64> {
    let ap = p.a_plus();
    let am = p.a_minus();
    let l2 = WeightedSpace::L2;
    let one = commutator(&ap, &adjoint(&am, &l2)) - ONE;
    let cross = commutator(&ap, &am);
    let self_p = commutator(&ap, &adjoint(&ap, &l2));
    let self_m = commutator(&am, &adjoint(&am, &l2));
    let mut f = vec![one.re, one.im, cross.re, cross.im, self_p.re, self_p.im, self_m.re, self_m.im];
    if mode == AnsatzMode::K3Boundary {
        let [k1, k2, k3] = p.k;
        let b = k3 * k3 - k1 * k2 * 4.0;
        f.push(b.re);
        f.push(b.im);
    }
    f
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Gauss-Newton with minimum-norm steps onto the constraint set.
fn project(start: AnsatzPoint, mode: AnsatzMode) -> (AnsatzPoint, f64) {
    let mut x = start.to_vec(mode);
    let n = x.len();
    let eval = |x: &[f64]| constraints(&AnsatzPoint::from_vec(x, mode), mode);
    let mut f = eval(&x);
    for _ in 0..60 {
        if inf_norm(&f) <= 1e-15 {
            break;
        }
        let m = f.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = 1e-6 * 1.0f64.max(x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (eval(&xp), eval(&xm));
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let svd = jac.svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let Ok(step) = svd.solve(&DVector::from_vec(f.clone()), cutoff) else { break };
        if step.iter().any(|s| !s.is_finite()) {
            break;
        }
        // backtracking on the residual norm
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
        let current = norm(&f);
        let mut t = 1.0;
        let mut accepted = None;
        while t >= 1.0 / 64.0 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - t * si).collect();
            let ft = eval(&trial);
            if norm(&ft) < current {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fnew)) = accepted else { break };
        x = xn;
        f = fnew;
        if inf_norm(&x) > 1e8 {
            break;
        }
    }
    (AnsatzPoint::from_vec(&x, mode), inf_norm(&f))
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, mode: AnsatzMode) -> AnsatzPoint {
    let mut p = AnsatzPoint {
        beta: [random_complex(rng), random_complex(rng)],
        eta: [random_complex(rng), random_complex(rng)],
        k: [random_complex(rng), random_complex(rng), random_complex(rng)],
    };
    if mode == AnsatzMode::RealCoefficients {
        for z in p.beta.iter_mut().chain(p.eta.iter_mut()) {
            z.im = 0.0;
        }
    }
    p
}

fn integrability_gap(q: &QuadraticForm) -> f64 {
    let v = integrability_check(&GaussianPolynomial::gaussian(*q), &WeightedSpace::L2);
    (-v.min_eigenvalue()).max(0.0)
}

/// Full evaluation of one pair of lowering operators, with `b± = a∓†`.
fn evaluate_operators(sample: u64, ap: FirstOrderOperator, am: FirstOrderOperator, residual: f64) -> SampleOutcome {
    if ap.is_multiplication() || am.is_multiplication() {
        return SampleOutcome::Degenerate;
    }
    let l2 = WeightedSpace::L2;
    let bp = adjoint(&am, &l2);
    let bm = adjoint(&ap, &l2);
    let phi = match solve_vacuum(&ap, &am, VacuumAnsatz::Full) {
        Ok(s) => s,
        Err(_) => return SampleOutcome::VacuumFailed,
        
    };
    let psi = match solve_vacuum(&adjoint(&bp, &l2), &adjoint(&bm, &l2), VacuumAnsatz::Full) {
        Ok(s) => s,
        Err(_) => return SampleOutcome::VacuumFailed,
        
    };
    let phi_ok = integrability_check(&phi.state(), &l2).integrable;
    let psi_ok = integrability_check(&psi.state(), &l2).integrable;
    let candidate = if phi_ok && psi_ok && reverify(&ap, &am, &phi.state(), &psi.state()) {
        Some(Box::new(Candidate { sample, a_plus: ap, a_minus: am, phi_vacuum: phi.q, psi_vacuum: psi.q }))
    } else {
        None
    };
    SampleOutcome::Evaluated { residual, phi_ok, psi_ok, gap: integrability_gap(&phi.q), candidate }
}

/// Independent re-verification of a would-be counterexample at 1e-10.
fn reverify(ap: &FirstOrderOperator, am: &FirstOrderOperator, phi: &GaussianPolynomial, psi: &GaussianPolynomial) -> bool {
    const STRICT: f64 = 1e-10;
    let l2 = WeightedSpace::L2;
    let bp = adjoint(am, &l2);
    let bm = adjoint(ap, &l2);
    if !check_pseudo_boson_ccr(ap, am, &bp, &bm, STRICT).all_pass() {
        return false;
    }
    let annihilated = |op: &FirstOrderOperator, f: &GaussianPolynomial| op.apply_to(f).map(|g| g.is_zero(STRICT)).unwrap_or(false);
    annihilated(ap, phi)
        && annihilated(am, phi)
        && annihilated(&adjoint(&bp, &l2), psi)
        && annihilated(&adjoint(&bm, &l2), psi)
        && integrability_check(phi, &l2).min_eigenvalue() > STRICT
        && integrability_check(psi, &l2).min_eigenvalue() > STRICT
}

impl FirstOrderOperator {
    fn apply_to(&self, f: &GaussianPolynomial) -> Result<GaussianPolynomial, crate::gaussian::GaussianError> {
        f.apply(self)
    }
}

fn run_sample(mode: AnsatzMode, seed: u64, index: u64) -> SampleOutcome {
    let mut rng = sample_rng(seed, index);
    match mode {
        AnsatzMode::ModelFamily => {
            // alternate between generic draws and draws on the ratio condition
            let p = if index.is_multiple_of(2) { random_params(&mut rng) } else { random_ratio_params(&mut rng) };
            let quad = build_pseudo_bosons(&p).expect("sampled parameters are valid");
            let residual = check_pseudo_boson_ccr(&quad.a_plus, &quad.a_minus, &quad.b_plus, &quad.b_minus, tol::ALG)
                .max_commutator_residual();
            evaluate_operators(index, quad.a_plus, quad.a_minus, residual)
        }
        _ => {
            let start = random_point(&mut rng, mode);
            let (point, residual) = project(start, mode);
            if residual > tol::ALG {
                return SampleOutcome::ProjectionFailed;
            }
            evaluate_operators(index, point.a_plus(), point.a_minus(), residual)
        }
    }
}

/// Randomised search for first-order pseudo-bosons with two normalisable vacua.
///
/// Samples are independent (per-index RNG streams) and evaluated in parallel;
/// the merged report does not depend on scheduling.
pub fn general_ansatz_search(mode: AnsatzMode, n_samples: u64, seed: u64) -> Result<AnsatzSearchReport, NogoError> {
    if n_samples == 0 {
        return Err(NogoError::InvalidArgument("n_samples must be at least 1".into()));
    }
    let outcomes: Vec<SampleOutcome> = (0..n_samples).into_par_iter().map(|i| run_sample(mode, seed, i)).collect();

    let mut r = AnsatzSearchReport {
        mode,
        seed,
        samples: n_samples,
        accepted: 0,
        rejected_projection: 0,
        rejected_degenerate: 0,
        vacuum_failures: 0,
        phi_integrable: 0,
        psi_integrable: 0,
        both_integrable: 0,
        max_constraint_residual: 0.0,
        best_residual: f64::INFINITY,
        candidates: Vec::new(),
        conclusion: SearchConclusion::NoSolutionConfirmed,
    };
    for o in outcomes {
        match o {
            SampleOutcome::Degenerate => r.rejected_degenerate += 1,
            SampleOutcome::ProjectionFailed => r.rejected_projection += 1,
            SampleOutcome::VacuumFailed => {
                r.accepted += 1;
                r.vacuum_failures += 1;
            }
            SampleOutcome::Evaluated { residual, phi_ok, psi_ok, gap, candidate } => {
                r.accepted += 1;
                r.max_constraint_residual = r.max_constraint_residual.max(residual);
                r.phi_integrable += phi_ok as u64;
                r.psi_integrable += psi_ok as u64;
                r.both_integrable += (phi_ok && psi_ok) as u64;
                r.best_residual = r.best_residual.min(gap);
                r.candidates.extend(candidate.map(|c| *c));
            }
        }
    }
    if !r.candidates.is_empty() {
        r.conclusion = SearchConclusion::SolutionCandidate;
    }
    Ok(r)
}

/// Hermitian matrix `H` with `[a, a†] = βᴴ·H·β` for `a = (K·β)·(x, y) + β·(∂x, ∂y)`,
/// the lowering operators annihilating `exp(−k1x² − k2y² − k3xy)`. Built by
/// polarisation of the commutator itself.
pub fn self_commutator_form(q: &QuadraticForm) -> Matrix2<Complex64> {
    let point = AnsatzPoint { beta: [ZERO; 2], eta: [ZERO; 2], k: [q.k1, q.k2, q.k3] };
    let h = |d: [Complex64; 2]| {
        let a = point.lowering(d);
        commutator(&a, &adjoint(&a, &WeightedSpace::L2))
    };
    let e = [[ONE, ZERO], [ZERO, ONE]];
    let mut m = Matrix2::zeros();
    let i = Complex64::i();
    for r in 0..2 {
        for c in 0..2 {
            let comb = |s: Complex64| [e[r][0] + s * e[c][0], e[r][1] + s * e[c][1]];
            m[(r, c)] = ((h(comb(ONE)) - h(comb(-ONE))) - i * (h(comb(i)) - h(comb(-i)))) * 0.25;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingCertificate {
    pub k1: f64,
    pub k2: f64,
    /// `H` from [`self_commutator_form`] for `k3 = 0`.
    pub form: [[Complex64; 2]; 2],
    pub eigenvalues: [f64; 2],
    /// Dimension of the null space of `H`: derivative vectors `β` with `[a, a†] = 0`.
    pub kernel_dimension: usize,
    /// With `β = η = 0` the operators vanish and `[a₊, a₋†] = 0 ≠ 1`.
    pub forced_commutator: Complex64,
    pub forcing_confirmed: bool,
}

/// For `exp(−k1x² − k2y²)` with `k1, k2 > 0`: `[a±, a±†] = 0` forces all
/// derivative coefficients of `a±` to vanish, hence `a± = 0`.
pub fn pure_gaussian_forcing(k1: f64, k2: f64) -> Result<ForcingCertificate, NogoError> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(NogoError::InvalidArgument(format!("k1, k2 must be positive, got {k1}, {k2}")));
    }
    let q = QuadraticForm::real(k1, k2, 0.0);
    let h = self_commutator_form(&q);
    let eig = h.symmetric_eigenvalues();
    let (lo, hi) = (eig[0].min(eig[1]), eig[0].max(eig[1]));
    let scale = hi.abs().max(f64::MIN_POSITIVE);
    let kernel_dimension = eig.iter().filter(|&&e| e.abs() <= tol::ALG * scale).count();
    let zero = AnsatzPoint { beta: [ZERO; 2], eta: [ZERO; 2], k: [q.k1, q.k2, q.k3] };
    let forced_commutator = commutator(&zero.a_plus(), &adjoint(&zero.a_minus(), &WeightedSpace::L2));
    Ok(ForcingCertificate {
        k1,
        k2,
        form: [[h[(0, 0)], h[(0, 1)]], [h[(1, 0)], h[(1, 1)]]],
        eigenvalues: [lo, hi],
        kernel_dimension,
        forced_commutator,
        forcing_confirmed: lo > 0.0 && kernel_dimension == 0 && forced_commutator == ZERO,
    })
}

mod rand_distr_free {
    use rand::Rng;

    /// Box-Muller standard normal.
    pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
