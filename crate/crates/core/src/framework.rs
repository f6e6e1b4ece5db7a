//! Biorthogonal ladder families and the operators built from them.
//!
//! A [`PseudoBosonSystem`] bundles two lowering operators `a_j`, the raising
//! operators `b_j` of the `φ` family and the weighted space. The `Ψ` family is
//! generated by `a_j*` from the vacuum of `b_j*`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{inner_product, GaussianError, GaussianPolynomial, QuadraticForm};
use crate::operator::{adjoint, check_pseudo_boson_ccr, compose, CcrReport, FirstOrderOperator, OperatorExpression, WeightedSpace};
use crate::qdho::{build_hamiltonian, PseudoBosonQuad};
use crate::vacuum::{solve_vacuum, VacuumAnsatz, VacuumError, VacuumSolution};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum FrameworkError {
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Vacuum(#[from] VacuumError),
    #[error("truncation mismatch: {left:?} vs {right:?}")]
    TruncationMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("vanishing normalisation <Psi00, phi00> = {value:?}")]
    ZeroNormalization { value: Complex64 },
}

/// Ladder states `r1ⁿ·r2ˡ·vacuum/√(n!·l!)` for `n ≤ n_max`, `l ≤ l_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderFamily {
    pub n_max: usize,
    pub l_max: usize,
    states: Vec<GaussianPolynomial>,
}

impl LadderFamily {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn truncation(&self) -> (usize, usize) {
        (self.n_max, self.l_max)
    }

    pub fn index(&self, n: usize, l: usize) -> usize {
        n * (self.l_max + 1) + l
    }

    pub fn get(&self, n: usize, l: usize) -> &GaussianPolynomial {
        &self.states[self.index(n, l)]
    }

    pub fn states(&self) -> &[GaussianPolynomial] {
        &self.states
    }

    /// `(n, l)` in storage order.
    pub fn labels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..=self.n_max).flat_map(move |n| (0..=self.l_max).map(move |l| (n, l)))
    }
}

pub fn build_ladder(
    vacuum: &GaussianPolynomial,
    r1: &FirstOrderOperator,
    r2: &FirstOrderOperator,
    n_max: usize,
    l_max: usize,
) -> Result<LadderFamily, FrameworkError> {
    let mut first_row = Vec::with_capacity(l_max + 1);
    first_row.push(vacuum.clone());
    for l in 1..=l_max {
        let prev: &GaussianPolynomial = &first_row[l - 1];
        first_row.push(prev.apply(r2)?.scale(ONE / (l as f64).sqrt()));
    }
    let mut states = vec![vacuum.clone(); (n_max + 1) * (l_max + 1)];
    for (l, s) in first_row.into_iter().enumerate() {
        states[l] = s;
    }
    for n in 1..=n_max {
        for l in 0..=l_max {
            let prev = &states[(n - 1) * (l_max + 1) + l];
            states[n * (l_max + 1) + l] = prev.apply(r1)?.scale(ONE / (n as f64).sqrt());
        }
    }
    Ok(LadderFamily { n_max, l_max, states })
}

/// Lowering and raising operators of a pseudo-bosonic pair in a weighted space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoBosonSystem {
    pub a: [FirstOrderOperator; 2],
    pub b: [FirstOrderOperator; 2],
    pub space: WeightedSpace,
    pub ansatz: VacuumAnsatz,
}

impl PseudoBosonSystem {
    /// `b_j*`, which annihilate `Ψ₀₀`.
    pub fn psi_lowering(&self) -> [FirstOrderOperator; 2] {
        [adjoint(&self.b[0], &self.space), adjoint(&self.b[1], &self.space)]
    }

    /// `a_j*`, which raise the `Ψ` family.
    pub fn psi_raising(&self) -> [FirstOrderOperator; 2] {
        [adjoint(&self.a[0], &self.space), adjoint(&self.a[1], &self.space)]
    }

    pub fn ccr(&self, tol: f64) -> CcrReport {
        check_pseudo_boson_ccr(&self.a[0], &self.a[1], &self.b[0], &self.b[1], tol)
    }

    pub fn phi_vacuum(&self) -> Result<VacuumSolution, FrameworkError> {
        Ok(solve_vacuum(&self.a[0], &self.a[1], self.ansatz)?)
    }

    pub fn psi_vacuum(&self) -> Result<VacuumSolution, FrameworkError> {
        let [l1, l2] = self.psi_lowering();
        Ok(solve_vacuum(&l1, &l2, self.ansatz)?)
    }

    pub fn phi_family(&self, n_max: usize, l_max: usize) -> Result<LadderFamily, FrameworkError> {
        build_ladder(&self.phi_vacuum()?.state(), &self.b[0], &self.b[1], n_max, l_max)
    }

    pub fn psi_family(&self, n_max: usize, l_max: usize) -> Result<LadderFamily, FrameworkError> {
        let [r1, r2] = self.psi_raising();
        build_ladder(&self.psi_vacuum()?.state(), &r1, &r2, n_max, l_max)
    }

    /// `N_j = b_j·a_j`.
    pub fn number_operators(&self) -> [OperatorExpression; 2] {
        [0, 1].map(|j| compose(&OperatorExpression::single(self.b[j]), &OperatorExpression::single(self.a[j])))
    }

    /// `𝔑_j = N_j*`.
    pub fn dual_number_operators(&self) -> [OperatorExpression; 2] {
        self.number_operators().map(|n| n.adjoint(&self.space))
    }
}

/// `a_j = (x_j + ∂_j)/√2`, `b_j = a_j† + λ_j` in `L²(ℝ²)`.
///
/// `φ₀₀ = exp(−(x² + y²)/2)`, `Ψ₀₀ = exp(−(x² + y²)/2 − √2·conj(λ₁)·x − √2·conj(λ₂)·y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureModel {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl FixtureModel {
    pub fn new(lambda1: Complex64, lambda2: Complex64) -> Self {
        Self { lambda1, lambda2 }
    }

    /// Ordinary bosons (`λ₁ = λ₂ = 0`).
    pub fn standard() -> Self {
        Self::new(ZERO, ZERO)
    }

    pub fn system(&self) -> PseudoBosonSystem {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a1 = s * (FirstOrderOperator::x() + FirstOrderOperator::d_x());
        let a2 = s * (FirstOrderOperator::y() + FirstOrderOperator::d_y());
        let b1 = s * (FirstOrderOperator::x() - FirstOrderOperator::d_x()) + self.lambda1 * FirstOrderOperator::identity();
        let b2 = s * (FirstOrderOperator::y() - FirstOrderOperator::d_y()) + self.lambda2 * FirstOrderOperator::identity();
        PseudoBosonSystem { a: [a1, a2], b: [b1, b2], space: WeightedSpace::L2, ansatz: VacuumAnsatz::Shifted }
    }

    /// `⟨Ψ₀₀, φ₀₀⟩ = π·exp((λ₁² + λ₂²)/2)`.
    pub fn closed_form_normalization(&self) -> Complex64 {
        ((self.lambda1 * self.lambda1 + self.lambda2 * self.lambda2) * 0.5).exp() * std::f64::consts::PI
    }
}

/// The damped-oscillator pair `(a₊, a₋; b₊, b₋)` viewed in `space`.
pub fn model_system(quad: &PseudoBosonQuad, space: WeightedSpace) -> PseudoBosonSystem {
    PseudoBosonSystem { a: [quad.a_plus, quad.a_minus], b: [quad.b_plus, quad.b_minus], space, ansatz: VacuumAnsatz::Full }
}

/// Orthonormal Hermite functions of `space`: `hₙ(x)·hₗ(y)·exp(c1x²/2 + c2y²/2)`.
pub fn reference_basis(n_max: usize, l_max: usize, space: &WeightedSpace) -> Result<LadderFamily, FrameworkError> {
    let std = FixtureModel::standard().system();
    let vacuum = GaussianPolynomial::gaussian(QuadraticForm::real(0.5, 0.5, 0.0))
        .scale(Complex64::new(1.0 / std::f64::consts::PI.sqrt(), 0.0));
    let plain = build_ladder(&vacuum, &std.b[0], &std.b[1], n_max, l_max)?;
    let shifted = QuadraticForm::real(0.5 * (1.0 - space.c1), 0.5 * (1.0 - space.c2), 0.0);
    Ok(LadderFamily { n_max, l_max, states: plain.states.iter().map(|s| s.with_exponent(shifted)).collect() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub n: usize,
    pub l: usize,
    pub eigenvalue: Complex64,
    /// Largest coefficient of `X·f − λ·f` relative to `max(1, |λ·f|∞)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub operator: String,
    pub entries: Vec<EigenEntry>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `X·f_{n,l} = λ(n, l)·f_{n,l}` on every state of the family.
pub fn check_eigenrelations(
    name: &str,
    family: &LadderFamily,
    op: &OperatorExpression,
    eigenvalue: impl Fn(usize, usize) -> Complex64,
    tol: f64,
) -> Result<EigenReport, FrameworkError> {
    let mut entries = Vec::with_capacity(family.dim());
    for (n, l) in family.labels() {
        let f = family.get(n, l);
        let lam = eigenvalue(n, l);
        let residual = f.scale(lam).scaled_residual(&op.apply(f)?)?;
        entries.push(EigenEntry { n, l, eigenvalue: lam, residual });
    }
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    Ok(EigenReport { operator: name.into(), entries, max_residual, tolerance: tol, passed: max_residual <= tol })
}

/// `N₁φ_{n,l} = n·φ_{n,l}`, `N₂φ_{n,l} = l·φ_{n,l}` and the same for `𝔑_j` on `Ψ`.
pub fn check_number_eigenrelations(
    system: &PseudoBosonSystem,
    phi: &LadderFamily,
    psi: &LadderFamily,
    tol: f64,
) -> Result<Vec<EigenReport>, FrameworkError> {
    let [n1, n2] = system.number_operators();
    let [d1, d2] = system.dual_number_operators();
    let count = |k: usize| Complex64::new(k as f64, 0.0);
    Ok(vec![
        check_eigenrelations("N1 phi", phi, &n1, |n, _| count(n), tol)?,
        check_eigenrelations("N2 phi", phi, &n2, |_, l| count(l), tol)?,
        check_eigenrelations("dual N1 psi", psi, &d1, |n, _| count(n), tol)?,
        check_eigenrelations("dual N2 psi", psi, &d2, |_, l| count(l), tol)?,
    ])
}

/// `H·φ_{n,l} = (ω₊·n + ω₋·l + (ω₊ + ω₋)/2)·φ_{n,l}` for the damped oscillator.
pub fn check_hamiltonian_spectrum(quad: &PseudoBosonQuad, phi: &LadderFamily, tol: f64) -> Result<EigenReport, FrameworkError> {
    let p = quad.params;
    let h = build_hamiltonian(quad);
    check_eigenrelations("H phi", phi, &h, |n, l| p.omega_plus * n as f64 + p.omega_minus * l as f64 + p.vacuum_energy(), tol)
}

fn same_truncation(a: &LadderFamily, b: &LadderFamily) -> Result<(), FrameworkError> {
    if a.truncation() != b.truncation() {
        return Err(FrameworkError::TruncationMismatch { left: a.truncation(), right: b.truncation() });
    }
    Ok(())
}

/// Square complex matrix indexed by ladder labels `(n, l) ↦ n·(l_max + 1) + l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedOperator {
    pub n_max: usize,
    pub l_max: usize,
    pub rows: Vec<Vec<Complex64>>,
}

impl TruncatedOperator {
    pub fn from_matrix(n_max: usize, l_max: usize, m: &DMatrix<Complex64>) -> Self {
        let rows = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
        Self { n_max, l_max, rows }
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let d = self.rows.len();
        DMatrix::from_fn(d, d, |i, j| self.rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn truncation(&self) -> (usize, usize) {
        (self.n_max, self.l_max)
    }

    /// `|X − 1|∞`.
    pub fn identity_defect(&self) -> f64 {
        max_abs(&(self.matrix() - DMatrix::identity(self.dim(), self.dim())))
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `⟨e_p, X·e_q⟩` over a basis orthonormal in `space`.
pub fn operator_matrix(op: &OperatorExpression, basis: &LadderFamily, space: &WeightedSpace) -> Result<TruncatedOperator, FrameworkError> {
    let images: Vec<GaussianPolynomial> = basis.states().iter().map(|e| op.apply(e)).collect::<Result<_, _>>()?;
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for p in 0..d {
        for q in 0..d {
            m[(p, q)] = inner_product(&basis.states()[p], &images[q], space)?;
        }
    }
    Ok(TruncatedOperator::from_matrix(basis.n_max, basis.l_max, &m))
}

/// `G[(n,l),(m,k)] = ⟨Ψ_{n,l}, φ_{m,k}⟩ / ⟨Ψ₀₀, φ₀₀⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub normalization: Complex64,
    pub matrix: TruncatedOperator,
    /// `|G − 1|∞`.
    pub identity_defect: f64,
}

pub fn gram_matrix(psi: &LadderFamily, phi: &LadderFamily, space: &WeightedSpace) -> Result<GramMatrix, FrameworkError> {
    same_truncation(psi, phi)?;
    let normalization = inner_product(psi.get(0, 0), phi.get(0, 0), space)?;
    if normalization.norm() == 0.0 || !normalization.is_finite() {
        return Err(FrameworkError::ZeroNormalization { value: normalization });
    }
    let d = phi.dim();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = inner_product(&psi.states()[i], &phi.states()[j], space)? / normalization;
        }
    }
    let matrix = TruncatedOperator::from_matrix(phi.n_max, phi.l_max, &g);
    let identity_defect = matrix.identity_defect();
    Ok(GramMatrix { normalization, matrix, identity_defect })
}

/// Smallest eigenvalue of the self-Gram matrix `⟨f_i, f_j⟩`; positive iff the family is linearly independent.
pub fn self_gram_min_eigenvalue(family: &LadderFamily, space: &WeightedSpace) -> Result<f64, FrameworkError> {
    let d = family.dim();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = inner_product(&family.states()[i], &family.states()[j], space)?;
        }
    }
    Ok(min_hermitian_eigenvalue(&g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SOperatorChecks {
    /// `max(|S_Ψ·S_φ − 1|∞, |S_φ·S_Ψ − 1|∞)`.
    pub product_defect: f64,
    /// `|S_φ·Ψ_j − φ_j|∞` in reference coordinates.
    pub maps_psi_to_phi: f64,
    /// `|S_Ψ·φ_j − Ψ_j|∞`.
    pub maps_phi_to_psi: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue_phi: f64,
    pub min_eigenvalue_psi: f64,
    /// Linear independence of the `φ` family.
    pub phi_gram_min_eigenvalue: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `S_φ = Σ |φ_i⟩⟨φ_i|`, `S_Ψ = Σ |Ψ_i⟩⟨Ψ_i|` over the truncation, with `Ψ`
/// rescaled so `⟨Ψ₀₀, φ₀₀⟩ = 1`, as matrices in the orthonormal reference basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SOperators {
    pub s_phi: TruncatedOperator,
    pub s_psi: TruncatedOperator,
    pub checks: SOperatorChecks,
}

/// Reference-basis coordinates `C[p][i] = ⟨e_p, f_i⟩·scale`.
fn coordinates(basis: &LadderFamily, family: &LadderFamily, space: &WeightedSpace, scale: Complex64) -> Result<DMatrix<Complex64>, FrameworkError> {
    let d = basis.dim();
    let mut c = DMatrix::zeros(d, d);
    for p in 0..d {
        for i in 0..d {
            c[(p, i)] = inner_product(&basis.states()[p], &family.states()[i], space)? * scale;
        }
    }
    Ok(c)
}

pub fn build_s_operators(phi: &LadderFamily, psi: &LadderFamily, space: &WeightedSpace, tol: f64) -> Result<SOperators, FrameworkError> {
    same_truncation(phi, psi)?;
    let gram = gram_matrix(psi, phi, space)?;
    let basis = reference_basis(phi.n_max, phi.l_max, space)?;
    let c_phi = coordinates(&basis, phi, space, ONE)?;
    let c_psi = coordinates(&basis, psi, space, ONE / gram.normalization.conj())?;
    let s_phi = &c_phi * c_phi.adjoint();
    let s_psi = &c_psi * c_psi.adjoint();
    let id = DMatrix::<Complex64>::identity(phi.dim(), phi.dim());

    let product_defect = max_abs(&(&s_psi * &s_phi - &id)).max(max_abs(&(&s_phi * &s_psi - &id)));
    let maps_psi_to_phi = max_abs(&(&s_phi * &c_psi - &c_phi));
    let maps_phi_to_psi = max_abs(&(&s_psi * &c_phi - &c_psi));
    let hermiticity_defect = max_abs(&(&s_phi - s_phi.adjoint())).max(max_abs(&(&s_psi - s_psi.adjoint())));
    let min_eigenvalue_phi = min_hermitian_eigenvalue(&s_phi);
    let min_eigenvalue_psi = min_hermitian_eigenvalue(&s_psi);
    let phi_gram_min_eigenvalue = self_gram_min_eigenvalue(phi, space)?;
    let passed = product_defect <= tol
        && maps_psi_to_phi <= tol
        && maps_phi_to_psi <= tol
        && hermiticity_defect <= tol
        && min_eigenvalue_phi > 0.0
        && min_eigenvalue_psi > 0.0
        && phi_gram_min_eigenvalue > 0.0;
    Ok(SOperators {
        s_phi: TruncatedOperator::from_matrix(phi.n_max, phi.l_max, &s_phi),
        s_psi: TruncatedOperator::from_matrix(phi.n_max, phi.l_max, &s_psi),
        checks: SOperatorChecks {
            product_defect,
            maps_psi_to_phi,
            maps_phi_to_psi,
            hermiticity_defect,
            min_eigenvalue_phi,
            min_eigenvalue_psi,
            phi_gram_min_eigenvalue,
            tolerance: tol,
            passed,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwiningReport {
    /// `|S_Ψ·N_j − 𝔑_j·S_Ψ|∞` for `j = 1, 2`.
    pub psi_residuals: [f64; 2],
    /// `|N_j·S_φ − S_φ·𝔑_j|∞`.
    pub phi_residuals: [f64; 2],
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `S_Ψ·N_j = 𝔑_j·S_Ψ` and `N_j·S_φ = S_φ·𝔑_j` on the truncation.
pub fn check_intertwining(
    s_psi: &TruncatedOperator,
    s_phi: &TruncatedOperator,
    number: [&TruncatedOperator; 2],
    dual_number: [&TruncatedOperator; 2],
    tol: f64,
) -> Result<IntertwiningReport, FrameworkError> {
    let t = s_psi.truncation();
    for other in [s_phi, number[0], number[1], dual_number[0], dual_number[1]] {
        if other.truncation() != t {
            return Err(FrameworkError::TruncationMismatch { left: t, right: other.truncation() });
        }
    }
    let (sp, sf) = (s_psi.matrix(), s_phi.matrix());
    let mut psi_residuals = [0.0; 2];
    let mut phi_residuals = [0.0; 2];
    for j in 0..2 {
        let (n, d) = (number[j].matrix(), dual_number[j].matrix());
        psi_residuals[j] = max_abs(&(&sp * &n - &d * &sp));
        phi_residuals[j] = max_abs(&(&n * &sf - &sf * &d));
    }
    let max_residual = psi_residuals.iter().chain(&phi_residuals).copied().fold(0.0, f64::max);
    Ok(IntertwiningReport { psi_residuals, phi_residuals, max_residual, tolerance: tol, passed: max_residual <= tol })
}

/// Everything at one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkRun {
    pub truncation: (usize, usize),
    pub gram: GramMatrix,
    pub eigen: Vec<EigenReport>,
    pub s_operators: SOperators,
    pub intertwining: IntertwiningReport,
}

pub fn run_framework(system: &PseudoBosonSystem, n_max: usize, l_max: usize, tol_eigen: f64, tol_trunc: f64) -> Result<FrameworkRun, FrameworkError> {
    let phi = system.phi_family(n_max, l_max)?;
    let psi = system.psi_family(n_max, l_max)?;
    let gram = gram_matrix(&psi, &phi, &system.space)?;
    let eigen = check_number_eigenrelations(system, &phi, &psi, tol_eigen)?;
    let s_operators = build_s_operators(&phi, &psi, &system.space, tol_trunc)?;
    let basis = reference_basis(n_max, l_max, &system.space)?;
    let [n1, n2] = system.number_operators();
    let [d1, d2] = system.dual_number_operators();
    let m = |op: &OperatorExpression| operator_matrix(op, &basis, &system.space);
    let (n1, n2, d1, d2) = (m(&n1)?, m(&n2)?, m(&d1)?, m(&d2)?);
    let intertwining = check_intertwining(&s_operators.s_psi, &s_operators.s_phi, [&n1, &n2], [&d1, &d2], tol_trunc)?;
    Ok(FrameworkRun { truncation: (n_max, l_max), gram, eigen, s_operators, intertwining })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub truncation: usize,
    pub product_defect: f64,
    /// `ε·d·‖S_Ψ‖∞·‖S_φ‖∞`, the rounding level of the product.
    pub rounding_floor: f64,
}

/// Induced ∞-norm (largest row sum).
fn row_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|c| c.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `|S_Ψ·S_φ − 1|∞` at square truncations `(k, k)`.
pub fn truncation_sweep(system: &PseudoBosonSystem, sizes: &[usize]) -> Result<Vec<SweepPoint>, FrameworkError> {
    sizes
        .iter()
        .map(|&k| {
            let phi = system.phi_family(k, k)?;
            let psi = system.psi_family(k, k)?;
            let s = build_s_operators(&phi, &psi, &system.space, f64::INFINITY)?;
            let d = phi.dim() as f64;
            let rounding_floor = f64::EPSILON * d * row_norm(&s.s_psi.matrix()) * row_norm(&s.s_phi.matrix());
            Ok(SweepPoint { truncation: k, product_defect: s.checks.product_defect, rounding_floor })
        })
        .collect()
}

/// Non-increasing, except that a point may rise as far as its own rounding floor.
pub fn monotone_with_floor(points: &[SweepPoint]) -> bool {
    points.windows(2).all(|w| w[1].product_defect <= w[0].product_defect.max(w[1].rounding_floor))
}
