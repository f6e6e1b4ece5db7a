//! Default numerical tolerances.

/// Coefficient-level algebra (commutators, adjoints, operator equality).
pub const ALG: f64 = 1e-12;

/// Closed-form integrals (determinants and inverses add roundoff).
pub const INT: f64 = 1e-8;

/// Solutions whose residual lies in `(ALG, BORDERLINE]` are neither accepted
/// nor rejected outright.
pub const BORDERLINE: f64 = 1e-8;

/// A real-part Gram determinant this close to zero is treated as degenerate.
pub const DEGENERATE_DET: f64 = 1e-10;

/// Truncated metric-operator identities.
pub const TRUNC: f64 = 1e-6;

/// Ladder eigenrelations (scaled coefficient residual).
pub const EIGEN: f64 = 1e-10;

/// Largest total polynomial degree a state may carry.
pub const MAX_DEGREE: usize = 64;
