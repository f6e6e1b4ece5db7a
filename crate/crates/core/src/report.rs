//! Parameter files, run configuration and report documents.
//!
//! Each subcommand produces a list of tagged checks and a JSON payload. The
//! payload and the checks depend only on the [`RunConfig`]; the timestamp is
//! supplied by the caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::framework::{
    build_s_operators, check_hamiltonian_spectrum, check_intertwining, check_number_eigenrelations, gram_matrix, model_system,
    monotone_with_floor, operator_matrix, reference_basis, truncation_sweep, FixtureModel, FrameworkError, PseudoBosonSystem,
};
use crate::gaussian::{integrability_check, GaussianError, QuadraticForm};
use crate::nogo::{general_ansatz_search, pure_gaussian_forcing, sign_obstruction, weighted_infeasibility, AnsatzMode, NogoError, SearchConclusion};
use crate::operator::WeightedSpace;
use crate::qdho::{build_params, build_pseudo_bosons, construction_disagreement, weighted_adjoint_quad, ModelParams, PseudoBosonQuad};
use crate::tol;
use crate::vacuum::{ratio_condition_defect, solve_vacuum_with_tol, VacuumAnsatz, VacuumError};

pub const SCHEMA_VERSION: &str = "1.0";
pub const TOOL: &str = "pbqdho";

const FIXTURE_NOTE: &str = "fixture: shifted canonical bosons a_j = (x_j + d_j)/sqrt2, b_j = a_j^dag + lambda_j; \
an artifact choice with regular biorthogonal families, not part of the damped oscillator";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot read parameter file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid parameter file: {0}")]
    Params(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Damped oscillator from `(m, γ, k, Γ, δ)`.
    #[default]
    Qdho,
    /// Shifted canonical bosons with `(λ₁, λ₂)`.
    Fixture,
    /// Canonical bosons.
    Standard,
}

/// Contents of a `--params` file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default)]
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "Gamma", default, skip_serializing_if = "Option::is_none")]
    pub big_gamma: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Complex64>,
    #[serde(default)]
    pub c1: f64,
    #[serde(default)]
    pub c2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<Complex64>,
}

impl ParamsFile {
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let p: Self = serde_json::from_str(text).map_err(|e| ReportError::Params(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &str) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    /// Presence checks only; physical validity is reported by the run.
    pub fn validate(&self) -> Result<(), ReportError> {
        if !(self.c1.is_finite() && self.c2.is_finite()) {
            return Err(ReportError::Params("c1 and c2 must be finite".into()));
        }
        if self.model == ModelKind::Qdho {
            let missing: Vec<&str> = [
                ("m", self.m.is_none()),
                ("gamma", self.gamma.is_none()),
                ("k", self.k.is_none()),
                ("Gamma", self.big_gamma.is_none()),
                ("delta", self.delta.is_none()),
            ]
            .into_iter()
            .filter_map(|(n, miss)| miss.then_some(n))
            .collect();
            if !missing.is_empty() {
                return Err(ReportError::Params(format!("qdho model requires {}", missing.join(", "))));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> WeightedSpace {
        WeightedSpace::new(self.c1, self.c2)
    }

    pub fn model_params(&self) -> Result<ModelParams, crate::qdho::ModelError> {
        build_params(
            self.m.unwrap_or(f64::NAN),
            self.gamma.unwrap_or(f64::NAN),
            self.k.unwrap_or(f64::NAN),
            self.big_gamma.unwrap_or_default(),
            self.delta.unwrap_or_default(),
        )
    }

    pub fn fixture(&self) -> FixtureModel {
        match self.model {
            ModelKind::Standard => FixtureModel::standard(),
            _ => FixtureModel::new(self.lambda1.unwrap_or_default(), self.lambda2.unwrap_or_default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    CheckCcr,
    Vacuum,
    NogoL2,
    NogoWeighted,
    NogoAnsatz,
    Ladder,
    Gram,
    SOperators,
    Intertwine,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Self::CheckCcr => "check-ccr",
            Self::Vacuum => "vacuum",
            Self::NogoL2 => "nogo-l2",
            Self::NogoWeighted => "nogo-weighted",
            Self::NogoAnsatz => "nogo-ansatz",
            Self::Ladder => "ladder",
            Self::Gram => "gram",
            Self::SOperators => "s-operators",
            Self::Intertwine => "intertwine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub params_path: Option<String>,
    /// `None` when no parameter file was given.
    pub params: Option<ParamsFile>,
    pub seed: u64,
    pub truncation: (usize, usize),
    pub grid: usize,
    pub cmax: f64,
    pub samples: u64,
    pub mode: AnsatzMode,
    pub expect_divergence: bool,
    pub expect_no_solution: bool,
    pub tol_alg: f64,
    pub tol_int: f64,
}

static NO_PARAMS: ParamsFile = ParamsFile {
    model: ModelKind::Qdho,
    m: None,
    gamma: None,
    k: None,
    big_gamma: None,
    delta: None,
    c1: 0.0,
    c2: 0.0,
    lambda1: None,
    lambda2: None,
};

impl RunConfig {
    pub fn new(subcommand: Subcommand, params: Option<ParamsFile>) -> Self {
        Self {
            subcommand,
            params_path: None,
            params,
            seed: 0,
            truncation: (5, 5),
            grid: 101,
            cmax: 10.0,
            samples: 10_000,
            mode: AnsatzMode::RealCoefficients,
            expect_divergence: false,
            expect_no_solution: false,
            tol_alg: tol::ALG,
            tol_int: tol::INT,
        }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        for (name, t) in [("tol-alg", self.tol_alg), ("tol-int", self.tol_int)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ReportError::Config(format!("{name} must be positive, got {t}")));
            }
        }
        if self.grid < 2 {
            return Err(ReportError::Config(format!("grid must be at least 2, got {}", self.grid)));
        }
        if !(self.cmax > 0.0 && self.cmax.is_finite()) {
            return Err(ReportError::Config(format!("cmax must be positive, got {}", self.cmax)));
        }
        if self.samples == 0 {
            return Err(ReportError::Config("samples must be at least 1".into()));
        }
        match (&self.params, self.subcommand) {
            (_, Subcommand::NogoAnsatz) => Ok(()),
            (Some(p), _) => p.validate(),
            (None, s) => Err(ReportError::Config(format!("{} requires a parameter file", s.name()))),
        }
    }

    pub fn params(&self) -> &ParamsFile {
        self.params.as_ref().unwrap_or(&NO_PARAMS)
    }
}

/// One verified statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub tag: String,
    pub name: String,
    pub passed: bool,
    /// Threshold the value was compared against; `null` for exact or boolean checks.
    pub tolerance: Option<f64>,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool: String,
    pub tool_version: String,
    pub timestamp: String,
    pub config: RunConfig,
    pub checks: Vec<CheckEntry>,
    pub payload: Value,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn exit_code(&self) -> i32 {
        if self.summary.all_passed {
            0
        } else {
            1
        }
    }

    /// Everything except the timestamp, serialized.
    pub fn deterministic_bytes(&self) -> Vec<u8> {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timestamp");
        serde_json::to_vec(&v).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Default)]
struct Checks(Vec<CheckEntry>);

impl Checks {
    fn below(&mut self, tag: &str, name: &str, value: f64, tol: f64) {
        self.0.push(CheckEntry { tag: tag.into(), name: name.into(), passed: value <= tol, tolerance: Some(tol), value: Some(value), detail: None });
    }

    fn holds(&mut self, tag: &str, name: &str, passed: bool, detail: Option<String>) {
        self.0.push(CheckEntry { tag: tag.into(), name: name.into(), passed, tolerance: None, value: None, detail });
    }

    fn valued(&mut self, tag: &str, name: &str, passed: bool, value: f64, detail: Option<String>) {
        self.0.push(CheckEntry { tag: tag.into(), name: name.into(), passed, tolerance: None, value: Some(value), detail });
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload serializes")
}

/// Runs one subcommand. Configuration errors are returned; domain errors become failing or expected checks.
pub fn run_subcommand(config: &RunConfig, timestamp: &str) -> Result<ReportDocument, ReportError> {
    config.validate()?;
    let mut checks = Checks::default();
    let payload = match config.subcommand {
        Subcommand::CheckCcr => run_check_ccr(config, &mut checks),
        Subcommand::Vacuum => run_vacuum(config, &mut checks),
        Subcommand::NogoL2 => run_nogo_l2(config, &mut checks),
        Subcommand::NogoWeighted => run_nogo_weighted(config, &mut checks),
        Subcommand::NogoAnsatz => run_nogo_ansatz(config, &mut checks),
        Subcommand::Ladder => run_ladder(config, &mut checks),
        Subcommand::Gram | Subcommand::SOperators | Subcommand::Intertwine => run_framework_command(config, &mut checks),
    };
    let checks = checks.0;
    let passed = checks.iter().filter(|c| c.passed).count();
    let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed, all_passed: !checks.is_empty() && passed == checks.len() };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION.into(),
        tool: TOOL.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timestamp: timestamp.into(),
        config: config.clone(),
        checks,
        payload,
        summary,
    })
}

/// Builds the damped-oscillator quad or records why it cannot be built.
fn model_quad(config: &RunConfig, checks: &mut Checks) -> Option<PseudoBosonQuad> {
    match config.params().model_params().and_then(|p| build_pseudo_bosons(&p)) {
        Ok(q) => Some(q),
        Err(e) => {
            checks.holds("model-params", "damped oscillator parameters are valid", false, Some(e.to_string()));
            None
        }
    }
}

fn run_check_ccr(config: &RunConfig, checks: &mut Checks) -> Value {
    let tol_alg = config.tol_alg;
    match config.params().model {
        ModelKind::Qdho => {
            let Some(quad) = model_quad(config, checks) else { return json!({ "error": "invalid model parameters" }) };
            let report = crate::operator::check_pseudo_boson_ccr(&quad.a_plus, &quad.a_minus, &quad.b_plus, &quad.b_minus, tol_alg);
            for c in &report.commutators {
                checks.below("ccr", &c.name, c.residual, tol_alg);
            }
            for c in &report.compatibility {
                checks.below("ccr-adjoint", &c.name, c.max_coefficient_diff, tol_alg);
            }
            let disagreement = construction_disagreement(&quad.params);
            checks.below("ladder-construction", "phase-space and direct ladder operators agree", disagreement, tol_alg);
            let space = config.params().space();
            let weighted = (!space.is_l2()).then(|| {
                let w = weighted_adjoint_quad(&quad, &space);
                let names = ["a+*", "a-*", "b+*", "b-*"];
                for (n, d) in names.iter().zip(w.corrected_diff) {
                    checks.below("weighted-adjoint", &format!("{n} matches its closed form"), d, tol_alg);
                }
                w
            });
            json!({
                "params": quad.params,
                "operators": { "a_plus": quad.a_plus, "a_minus": quad.a_minus, "b_plus": quad.b_plus, "b_minus": quad.b_minus },
                "ccr": report,
                "construction_disagreement": disagreement,
                "weighted_adjoints": weighted,
            })
        }
        _ => {
            let fixture = config.params().fixture();
            let sys = fixture.system();
            let report = sys.ccr(tol_alg);
            for c in &report.commutators {
                checks.below("ccr", &c.name, c.residual, tol_alg);
            }
            json!({
                "note": FIXTURE_NOTE,
                "fixture": fixture,
                "operators": { "a1": sys.a[0], "a2": sys.a[1], "b1": sys.b[0], "b2": sys.b[1] },
                "ccr": report,
                "compatibility_note": "b_j = a_j^dag + lambda_j pairs a_j with b_j; the cross-pairing adjoint relations are not expected",
            })
        }
    }
}

/// Records a vacuum outcome against the `expect_no_solution` flag.
fn vacuum_outcome(
    config: &RunConfig,
    checks: &mut Checks,
    tag: &str,
    name: &str,
    result: &Result<crate::vacuum::VacuumSolution, VacuumError>,
) {
    match (result, config.expect_no_solution) {
        (Ok(s), false) => checks.below(tag, name, s.residual, config.tol_alg),
        (Ok(s), true) => checks.valued(tag, &format!("{name}: no solution expected"), false, s.residual, Some("a joint vacuum was found".into())),
        (Err(VacuumError::NoSolution { consistency_defect, diagnostic, .. }), true) => {
            checks.valued(tag, &format!("{name}: no solution (expected)"), true, *consistency_defect, Some(diagnostic.clone()))
        }
        (Err(e), _) => checks.holds(tag, name, false, Some(e.to_string())),
    }
}

fn run_vacuum(config: &RunConfig, checks: &mut Checks) -> Value {
    match config.params().model {
        ModelKind::Qdho => {
            let Some(quad) = model_quad(config, checks) else { return json!({ "error": "invalid model parameters" }) };
            let p = quad.params;
            let ratio = ratio_condition_defect(&p).ok();
            let diag = solve_vacuum_with_tol(&quad.a_plus, &quad.a_minus, VacuumAnsatz::Diagonal, config.tol_alg);
            vacuum_outcome(config, checks, "vacuum-diagonal", "joint diagonal vacuum of a+ and a-", &diag);
            let closed = QuadraticForm::new(p.beta * p.omega_plus / (p.big_gamma * 2.0), -p.delta / (p.alpha * p.omega_plus * 2.0), Complex64::new(0.0, 0.0));
            if let Ok(s) = &diag {
                let scale = 1.0f64.max(closed.k1.norm()).max(closed.k2.norm());
                checks.below("vacuum-closed-form", "exponent matches (beta w+/2Gamma, -delta/2alpha w+)", s.q.max_diff(&closed) / scale, config.tol_alg);
                let im = s.q.k1.im.abs().max(s.q.k2.im.abs()) / scale;
                checks.below("vacuum-closed-form", "exponent coefficients are real", im, config.tol_alg);
            }
            let full = solve_vacuum_with_tol(&quad.a_plus, &quad.a_minus, VacuumAnsatz::Full, config.tol_alg);
            let space = config.params().space();
            let sys = model_system(&quad, space);
            let psi = sys.psi_vacuum();
            let phi_verdict = diag.as_ref().ok().map(|s| integrability_check(&s.state(), &space));
            json!({
                "params": p,
                "space": space,
                "ratio_condition_defect": ratio,
                "diagonal": result_value(&diag),
                "closed_form": closed,
                "full": result_value(&full),
                "psi_vacuum": framework_value(&psi),
                "phi_integrable": phi_verdict,
            })
        }
        _ => {
            let sys = config.params().fixture().system();
            let phi = solve_vacuum_with_tol(&sys.a[0], &sys.a[1], VacuumAnsatz::Shifted, config.tol_alg);
            let [l1, l2] = sys.psi_lowering();
            let psi = solve_vacuum_with_tol(&l1, &l2, VacuumAnsatz::Shifted, config.tol_alg);
            vacuum_outcome(config, checks, "vacuum-shifted", "vacuum of a1, a2", &phi);
            vacuum_outcome(config, checks, "vacuum-shifted", "vacuum of b1*, b2*", &psi);
            for (name, r) in [("phi00 is normalisable", &phi), ("Psi00 is normalisable", &psi)] {
                if let Ok(s) = r {
                    let ok = integrability_check(&s.state(), &WeightedSpace::L2).integrable;
                    checks.holds("vacuum-integrable", name, ok, None);
                }
            }
            json!({ "note": FIXTURE_NOTE, "phi_vacuum": result_value(&phi), "psi_vacuum": result_value(&psi) })
        }
    }
}

fn result_value<T: Serialize, E: Serialize>(r: &Result<T, E>) -> Value {
    match r {
        Ok(v) => json!({ "ok": v }),
        Err(e) => json!({ "error": e }),
    }
}

fn framework_value<T: Serialize>(r: &Result<T, FrameworkError>) -> Value {
    match r {
        Ok(v) => json!({ "ok": v }),
        Err(e) => json!({ "error": e, "message": e.to_string() }),
    }
}

fn require_qdho(config: &RunConfig, checks: &mut Checks) -> Option<PseudoBosonQuad> {
    if config.params().model != ModelKind::Qdho {
        checks.holds("model-params", "subcommand requires the damped oscillator model", false, None);
        return None;
    }
    model_quad(config, checks)
}

fn run_nogo_l2(config: &RunConfig, checks: &mut Checks) -> Value {
    let Some(quad) = require_qdho(config, checks) else { return json!({ "error": "damped oscillator parameters required" }) };
    let p = quad.params;
    match sign_obstruction(&p) {
        Ok(cert) => {
            checks.holds("l2-sign-obstruction", "u*v > 0 so u > 0 and v < 0 cannot both hold", cert.verdict, None);
            checks.below("l2-sign-obstruction", "u*v = |delta/Gamma|^2", cert.product_identity_defect, 1e-10);
            checks.below("l2-sign-obstruction", "Im(beta w+/Gamma) vanishes", cert.imag_residuals[0], config.tol_alg);
            checks.below("l2-sign-obstruction", "Im(delta/(alpha w+)) vanishes", cert.imag_residuals[1], config.tol_alg);
            checks.holds("l2-vacuum", "phi00 is not square integrable in L2", !cert.vacuum_integrable, None);
            let damping_match = cert.damping_product_defect.map(|d| d <= 1e-10);
            json!({
                "params": p,
                "certificate": cert,
                "product_identity": {
                    "matches_representation_coefficient": cert.product_identity_defect <= 1e-10,
                    "matches_damping_constant": damping_match,
                },
            })
        }
        Err(NogoError::Precondition { defect }) => {
            // no joint vacuum at all
            let diag = solve_vacuum_with_tol(&quad.a_plus, &quad.a_minus, VacuumAnsatz::Diagonal, config.tol_alg);
            let absent = matches!(diag, Err(VacuumError::NoSolution { .. }));
            checks.valued("l2-sign-obstruction", "ratio condition fails: no joint diagonal vacuum exists", absent, defect, None);
            json!({ "params": p, "ratio_condition_defect": defect, "diagonal": result_value(&diag) })
        }
        Err(e) => {
            checks.holds("l2-sign-obstruction", "sign obstruction", false, Some(e.to_string()));
            json!({ "error": e })
        }
    }
}

fn run_nogo_weighted(config: &RunConfig, checks: &mut Checks) -> Value {
    let Some(quad) = require_qdho(config, checks) else { return json!({ "error": "damped oscillator parameters required" }) };
    let p = quad.params;
    let report = match weighted_infeasibility(&p, config.cmax, config.grid) {
        Ok(r) => r,
        Err(e) => {
            checks.holds("weighted-infeasibility", "weighted feasibility scan", false, Some(e.to_string()));
            return json!({ "params": p, "error": e });
        }
    };
    checks.valued("weighted-infeasibility", "no grid point admits both vacua", !report.joint_feasible_found, report.joint_points as f64, None);
    checks.holds("weighted-infeasibility", "analytic contradiction for all real (c1, c2)", report.analytic_contradiction, Some(report.analytic_certificate.join("; ")));
    checks.holds("weighted-infeasibility", "phi condition at the origin agrees with L2", report.origin_matches_l2, None);

    // a weight in which phi00 is normalisable, and H acting on phi00 there
    let [t1, t2] = report.phi_region_threshold;
    let space = WeightedSpace::new(t1 + 1.0, t2 + 1.0);
    let sys = model_system(&quad, space);
    let h_check = sys.phi_family(0, 0).and_then(|fam| {
        let verdict = integrability_check(fam.get(0, 0), &space);
        let h = check_hamiltonian_spectrum(&quad, &fam, 1e-10)?;
        Ok((verdict, h))
    });
    match &h_check {
        Ok((verdict, h)) => {
            checks.holds("weighted-vacuum", "phi00 is normalisable in the chosen weight", verdict.integrable, None);
            checks.below("weighted-energy", "H phi00 = (w+ + w-)/2 phi00", h.max_residual, 1e-10);
        }
        Err(e) => checks.holds("weighted-energy", "H phi00 = (w+ + w-)/2 phi00", false, Some(e.to_string())),
    }
    let psi = sys.psi_vacuum();
    let psi_verdict = psi.as_ref().ok().map(|s| integrability_check(&s.state(), &space));
    if let Some(v) = &psi_verdict {
        checks.holds("weighted-vacuum", "Psi00 is not normalisable in the same weight", !v.integrable, None);
    }
    json!({
        "params": p,
        "feasibility": report,
        "witness_space": space,
        "hamiltonian": h_check.as_ref().ok().map(|(v, h)| json!({ "phi_integrable": v, "eigen": h })),
        "psi_vacuum": framework_value(&psi),
        "psi_integrable": psi_verdict,
    })
}

/// `(k1, k2)` pairs for the pure-Gaussian forcing certificate.
const FORCING_GRID: [(f64, f64); 6] = [(0.5, 0.5), (0.1, 2.0), (1.0, 0.25), (3.0, 3.0), (0.01, 10.0), (7.5, 0.3)];

fn run_nogo_ansatz(config: &RunConfig, checks: &mut Checks) -> Value {
    let search = match general_ansatz_search(config.mode, config.samples, config.seed) {
        Ok(r) => r,
        Err(e) => {
            checks.holds("ansatz-search", "first-order ansatz search", false, Some(e.to_string()));
            return json!({ "error": e });
        }
    };
    checks.valued(
        "ansatz-search",
        "no first-order pseudo-bosons with two normalisable vacua",
        search.conclusion == SearchConclusion::NoSolutionConfirmed,
        search.best_residual,
        Some(format!("{} of {} samples on the constraint set", search.accepted, search.samples)),
    );
    checks.below("ansatz-search", "constraint residual of accepted samples", search.max_constraint_residual, config.tol_alg);
    let forcing: Vec<_> = FORCING_GRID.iter().filter_map(|&(k1, k2)| pure_gaussian_forcing(k1, k2).ok()).collect();
    for f in &forcing {
        checks.valued(
            "pure-gaussian-forcing",
            &format!("k1 = {}, k2 = {}: [a, a^dag] = 0 forces zero derivative part", f.k1, f.k2),
            f.forcing_confirmed,
            f.eigenvalues[0],
            None,
        );
    }
    json!({ "search": search, "forcing": forcing })
}

fn system_for(config: &RunConfig, checks: &mut Checks) -> Option<(PseudoBosonSystem, Option<PseudoBosonQuad>)> {
    match config.params().model {
        ModelKind::Qdho => {
            let quad = model_quad(config, checks)?;
            Some((model_system(&quad, config.params().space()), Some(quad)))
        }
        _ => Some((config.params().fixture().system(), None)),
    }
}

fn run_ladder(config: &RunConfig, checks: &mut Checks) -> Value {
    let Some((sys, quad)) = system_for(config, checks) else { return json!({ "error": "invalid model parameters" }) };
    let (n, l) = config.truncation;
    let families = sys.phi_family(n, l).and_then(|phi| Ok((sys.psi_family(n, l)?, phi)));
    let (psi, phi) = match families {
        Ok(f) => f,
        Err(FrameworkError::Vacuum(e)) if config.expect_no_solution => {
            checks.holds("ladder-vacuum", "no joint vacuum (expected)", true, Some(e.to_string()));
            return json!({ "vacuum": { "error": e } });
        }
        Err(e) => {
            checks.holds("ladder-vacuum", "ladder families built", false, Some(e.to_string()));
            return json!({ "error": e, "message": e.to_string() });
        }
    };
    if config.expect_no_solution {
        checks.holds("ladder-vacuum", "no joint vacuum expected", false, Some("vacua were found".into()));
    }
    let eigen = match check_number_eigenrelations(&sys, &phi, &psi, tol::EIGEN) {
        Ok(r) => r,
        Err(e) => {
            checks.holds("ladder-eigen", "number-operator eigenrelations", false, Some(e.to_string()));
            return json!({ "error": e });
        }
    };
    for r in &eigen {
        checks.below("ladder-eigen", &r.operator, r.max_residual, r.tolerance);
    }
    let hamiltonian = quad.as_ref().map(|q| check_hamiltonian_spectrum(q, &phi, tol::EIGEN));
    if let Some(h) = &hamiltonian {
        match h {
            Ok(h) => checks.below("ladder-energy", "H phi_nl = (w+ n + w- l + (w+ + w-)/2) phi_nl", h.max_residual, h.tolerance),
            Err(e) => checks.holds("ladder-energy", "H eigenrelations", false, Some(e.to_string())),
        }
    }
    let phi_verdict = integrability_check(phi.get(0, 0), &sys.space);
    let psi_verdict = integrability_check(psi.get(0, 0), &sys.space);
    json!({
        "note": (quad.is_none()).then_some(FIXTURE_NOTE),
        "space": sys.space,
        "phi_vacuum": phi.get(0, 0).exponent(),
        "psi_vacuum": psi.get(0, 0).exponent(),
        "phi_integrable": phi_verdict,
        "psi_integrable": psi_verdict,
        "eigenrelations": eigen,
        "hamiltonian": hamiltonian.map(|h| h.ok()),
    })
}

fn divergence(e: &FrameworkError) -> bool {
    matches!(e, FrameworkError::Gaussian(GaussianError::DivergentIntegral { .. }))
}

/// Shared tail of `gram`, `s-operators` and `intertwine`.
fn run_framework_command(config: &RunConfig, checks: &mut Checks) -> Value {
    let Some((sys, quad)) = system_for(config, checks) else { return json!({ "error": "invalid model parameters" }) };
    let (n, l) = config.truncation;
    let tag = config.subcommand.name();
    let result = framework_payload(config, &sys, n, l, checks);
    let mut payload = match result {
        Ok(v) => {
            if config.expect_divergence {
                checks.holds(tag, "divergent inner product expected", false, Some("all inner products converged".into()));
            }
            v
        }
        Err(e) if config.expect_divergence && divergence(&e) => {
            checks.holds(tag, "inner product diverges (expected: vacua are not normalisable)", true, Some(e.to_string()));
            json!({ "error": e, "message": e.to_string() })
        }
        Err(FrameworkError::Vacuum(e)) if config.expect_no_solution => {
            checks.holds(tag, "no joint vacuum (expected)", true, Some(e.to_string()));
            json!({ "error": e })
        }
        Err(e) => {
            checks.holds(tag, "framework run", false, Some(e.to_string()));
            json!({ "error": e, "message": e.to_string() })
        }
    };
    let obj = payload.as_object_mut().expect("payload is an object");
    obj.insert("truncation".into(), json!([n, l]));
    obj.insert("space".into(), to_value(&sys.space));
    if quad.is_none() {
        obj.insert("note".into(), json!(FIXTURE_NOTE));
        obj.insert("fixture".into(), to_value(&config.params().fixture()));
    } else {
        obj.insert("params".into(), to_value(&quad.map(|q| q.params)));
    }
    payload
}

fn framework_payload(config: &RunConfig, sys: &PseudoBosonSystem, n: usize, l: usize, checks: &mut Checks) -> Result<Value, FrameworkError> {
    let phi = sys.phi_family(n, l)?;
    let psi = sys.psi_family(n, l)?;
    let space = sys.space;
    match config.subcommand {
        Subcommand::Gram => {
            let g = gram_matrix(&psi, &phi, &space)?;
            checks.below("gram", "<Psi_nl, phi_mk> = delta", g.identity_defect, config.tol_int);
            let m = g.matrix.matrix();
            let deviation: Vec<Vec<f64>> = (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| (m[(i, j)] - if i == j { 1.0 } else { 0.0 }).norm()).collect())
                .collect();
            Ok(json!({ "gram": g, "identity_deviation": deviation }))
        }
        Subcommand::SOperators => {
            let s = build_s_operators(&phi, &psi, &space, tol::TRUNC)?;
            let c = &s.checks;
            checks.below("s-operators", "S_Psi S_phi = 1 on the truncation", c.product_defect, tol::TRUNC);
            checks.below("s-operators", "S_phi Psi_j = phi_j", c.maps_psi_to_phi, tol::TRUNC);
            checks.below("s-operators", "S_Psi phi_j = Psi_j", c.maps_phi_to_psi, tol::TRUNC);
            checks.below("s-operators", "S_phi and S_Psi are Hermitian", c.hermiticity_defect, tol::TRUNC);
            checks.valued("s-operators", "S_phi is positive", c.min_eigenvalue_phi > 0.0, c.min_eigenvalue_phi, None);
            checks.valued("s-operators", "S_Psi is positive", c.min_eigenvalue_psi > 0.0, c.min_eigenvalue_psi, None);
            checks.valued("s-operators", "phi family is linearly independent", c.phi_gram_min_eigenvalue > 0.0, c.phi_gram_min_eigenvalue, None);
            let k_max = n.min(l);
            let sizes: Vec<usize> = (2.min(k_max)..=k_max).collect();
            let sweep = truncation_sweep(sys, &sizes)?;
            checks.holds("s-operators", "product defect is non-increasing in the truncation up to rounding", monotone_with_floor(&sweep), None);
            Ok(json!({ "s_operators": s, "sweep": sweep, "reference_basis": "orthonormal Hermite functions of the weighted space" }))
        }
        Subcommand::Intertwine => {
            let s = build_s_operators(&phi, &psi, &space, tol::TRUNC)?;
            let basis = reference_basis(n, l, &space)?;
            let [n1, n2] = sys.number_operators();
            let [d1, d2] = sys.dual_number_operators();
            let m = |op| operator_matrix(op, &basis, &space);
            let (n1, n2, d1, d2) = (m(&n1)?, m(&n2)?, m(&d1)?, m(&d2)?);
            let r = check_intertwining(&s.s_psi, &s.s_phi, [&n1, &n2], [&d1, &d2], tol::TRUNC)?;
            for j in 0..2 {
                checks.below("intertwining", &format!("S_Psi N{} = dual N{} S_Psi", j + 1, j + 1), r.psi_residuals[j], tol::TRUNC);
                checks.below("intertwining", &format!("N{} S_phi = S_phi dual N{}", j + 1, j + 1), r.phi_residuals[j], tol::TRUNC);
            }
            Ok(json!({ "intertwining": r }))
        }
        _ => unreachable!("not a framework subcommand"),
    }
}
