//! Symbolic-numeric engine for two-dimensional pseudo-bosons and the quantum
//! damped harmonic oscillator.
//!
//! The crate is organised bottom-up:
//!
//! * [`operator`]: first-order differential operators in `(x, y)`, commutators,
//!   weighted-space adjoints and finite operator expressions.
//! * [`gaussian`]: polynomial-times-Gaussian states, exact operator action,
//!   square-integrability verdicts and closed-form weighted inner products.
//! * [`vacuum`]: joint Gaussian vacua of two lowering operators.
//! * [`qdho`]: the damped-oscillator model and its pseudo-bosonic ladder operators.
//! * [`nogo`]: machine-checked certificates that the model admits no pair of
//!   square-integrable vacua.
//! * [`framework`]: ladder families, biorthogonality, truncated metric operators
//!   and intertwining checks.
//! * [`report`]: parameter files, run configuration and JSON reports.

pub mod framework;
pub mod gaussian;
pub mod nogo;
pub mod operator;
pub mod qdho;
pub mod report;
pub mod sampling;
pub mod tol;
pub mod vacuum;

pub use num_complex::Complex64;

pub use framework::{FixtureModel, LadderFamily, TruncatedOperator};
pub use gaussian::{GaussianPolynomial, IntegrabilityVerdict, QuadraticForm};
pub use operator::{FirstOrderOperator, OperatorExpression, WeightedSpace};
pub use qdho::{ModelParams, PseudoBosonQuad};
pub use vacuum::{VacuumAnsatz, VacuumSolution};
