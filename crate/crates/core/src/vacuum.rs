//! Joint Gaussian vacua `A₁f = A₂f = 0`.
//!
//! With `f = exp(−k1·x² − k2·y² − k3·xy − l1·x − l2·y)` the condition
//! `A f = 0` is linear in the exponent coefficients:
//!
//! ```text
//! cx − 2k1·dx − k3·dy = 0
//! cy − k3·dx − 2k2·dy = 0
//! e  − l1·dx  − l2·dy = 0     (shifted ansatz only)
//! ```
//!
//! Two operators give an overdetermined complex system, solved by least
//! squares. The distance of the right-hand side from the column space is
//! the consistency defect: zero exactly when a joint vacuum exists.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{GaussianPolynomial, QuadraticForm};
use crate::operator::FirstOrderOperator;
use crate::qdho::ModelParams;
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which exponent coefficients are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuumAnsatz {
    /// `exp(−k1·x² − k2·y²)`: no cross term.
    Diagonal,
    /// `exp(−k1·x² − k2·y² − k3·xy)`.
    Full,
    /// `exp(−q − l1·x − l2·y)`: admits operators with a constant part.
    Shifted,
}

impl VacuumAnsatz {
    fn unknowns(self) -> usize {
        match self {
            VacuumAnsatz::Diagonal => 2,
            VacuumAnsatz::Full => 3,
            VacuumAnsatz::Shifted => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuumStatus {
    Solved,
    /// Residual between the algebraic tolerance and [`tol::BORDERLINE`].
    Borderline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VacuumSolution {
    pub q: QuadraticForm,
    pub ansatz: VacuumAnsatz,
    pub status: VacuumStatus,
    /// Largest leftover equation coefficient, relative to `max(1, |k|∞)`.
    pub residual: f64,
    /// Euclidean norm of the least-squares residual.
    pub consistency_defect: f64,
    pub rank: usize,
    /// True when the exponent is not uniquely determined (rank deficit).
    pub underdetermined: bool,
}

impl VacuumSolution {
    pub fn state(&self) -> GaussianPolynomial {
        GaussianPolynomial::gaussian(self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum VacuumError {
    #[error("no joint Gaussian vacuum: {diagnostic} (residual {residual:e}, consistency defect {consistency_defect:e})")]
    NoSolution { residual: f64, consistency_defect: f64, diagnostic: String },
    #[error("ratio condition undefined: Gamma*conj(delta) - delta*conj(Gamma) = 0")]
    DegenerateParams,
}

/// `ω₊/ω₋ + (δ/conj(δ))(Γ/conj(Γ))`: zero exactly when the no-cross-term
/// Gaussian is a joint vacuum of `a₊` and `a₋`.
pub fn ratio_condition_defect(params: &ModelParams) -> Result<Complex64, VacuumError> {
    let (g, d) = (params.big_gamma, params.delta);
    if (g * d.conj() - d * g.conj()).norm() == 0.0 {
        return Err(VacuumError::DegenerateParams);
    }
    Ok(params.omega_plus / params.omega_minus + (d / d.conj()) * (g / g.conj()))
}

pub fn solve_vacuum(a1: &FirstOrderOperator, a2: &FirstOrderOperator, ansatz: VacuumAnsatz) -> Result<VacuumSolution, VacuumError> {
    solve_vacuum_with_tol(a1, a2, ansatz, tol::ALG)
}

pub fn solve_vacuum_with_tol(
    a1: &FirstOrderOperator,
    a2: &FirstOrderOperator,
    ansatz: VacuumAnsatz,
    tol: f64,
) -> Result<VacuumSolution, VacuumError> {
    for (name, op) in [("A1", a1), ("A2", a2)] {
        if op.is_multiplication() && op.max_abs() > 0.0 {
            return Err(VacuumError::NoSolution {
                residual: f64::INFINITY,
                consistency_defect: f64::INFINITY,
                diagnostic: format!("{name} has no derivative part; a multiplication operator annihilates no nonzero state"),
            });
        }
        if ansatz != VacuumAnsatz::Shifted && op.e != ZERO {
            return Err(VacuumError::NoSolution {
                residual: f64::INFINITY,
                consistency_defect: f64::INFINITY,
                diagnostic: format!("{name} has a constant term; only the shifted ansatz can absorb it"),
            });
        }
    }

    let n = ansatz.unknowns();
    let rows_per_op = if ansatz == VacuumAnsatz::Shifted { 3 } else { 2 };
    let mut a = DMatrix::<Complex64>::zeros(2 * rows_per_op, n);
    let mut b = DVector::<Complex64>::zeros(2 * rows_per_op);
    for (k, op) in [a1, a2].into_iter().enumerate() {
        // the vacuum of A is the vacuum of λA
        let s = op.max_abs();
        let op = if s > 0.0 { op.scale(Complex64::new(1.0 / s, 0.0)) } else { *op };
        let r = k * rows_per_op;
        // unknown order: k1, k2, [k3], [l1, l2]
        a[(r, 0)] = op.dx * -2.0;
        a[(r + 1, 1)] = op.dy * -2.0;
        if n >= 3 {
            a[(r, 2)] = -op.dy;
            a[(r + 1, 2)] = -op.dx;
        }
        b[r] = -op.cx;
        b[r + 1] = -op.cy;
        if ansatz == VacuumAnsatz::Shifted {
            a[(r + 2, 3)] = -op.dx;
            a[(r + 2, 4)] = -op.dy;
            b[r + 2] = -op.e;
        }
    }

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = 1e-12 * smax.max(f64::MIN_POSITIVE);
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let sol = svd.solve(&b, cutoff).expect("SVD computed with both factors");
    let r = &b - &a * &sol;
    let k_scale = sol.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let residual = r.iter().map(|c| c.norm()).fold(0.0, f64::max) / k_scale;
    let consistency_defect = r.norm();

    let q = match ansatz {
        VacuumAnsatz::Diagonal => QuadraticForm::new(sol[0], sol[1], ZERO),
        VacuumAnsatz::Full => QuadraticForm::new(sol[0], sol[1], sol[2]),
        VacuumAnsatz::Shifted => QuadraticForm::new(sol[0], sol[1], sol[2]).with_linear(sol[3], sol[4]),
    };
    let status = if residual <= tol {
        VacuumStatus::Solved
    } else if residual <= tol::BORDERLINE.max(tol) {
        VacuumStatus::Borderline
    } else {
        return Err(VacuumError::NoSolution {
            residual,
            consistency_defect,
            diagnostic: "stacked vacuum equations are inconsistent".into(),
        });
    };
    Ok(VacuumSolution { q, ansatz, status, residual, consistency_defect, rank, underdetermined: rank < n })
}
