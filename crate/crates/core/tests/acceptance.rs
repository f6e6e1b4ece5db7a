//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{c, convergent_case, divergent_case, oracle_alpha_beta, oracle_omegas, quadrature_inner_product};
use pbqdho::framework::{run_framework, truncation_sweep, monotone_with_floor};
use pbqdho::gaussian::{inner_product, integrability_check, GaussianError, GaussianPolynomial};
use pbqdho::nogo::{general_ansatz_search, pure_gaussian_forcing, sign_obstruction, weighted_infeasibility, AnsatzMode, SearchConclusion};
use pbqdho::operator::check_pseudo_boson_ccr;
use pbqdho::qdho::{build_hamiltonian, build_pseudo_bosons, construction_disagreement, ModelParams};
use pbqdho::report::{run_subcommand, ParamsFile, RunConfig, Subcommand};
use pbqdho::sampling::{random_params, random_ratio_params, random_violating_params, sample_rng};
use pbqdho::vacuum::{solve_vacuum, VacuumAnsatz, VacuumError};
use pbqdho::{tol, Complex64, FixtureModel, FirstOrderOperator, WeightedSpace};

const SEED: u64 = 20240601;

type Outcome = (bool, String);

fn ratio_draws() -> Vec<ModelParams> {
    let mut rng = sample_rng(SEED, 1);
    (0..200).map(|_| random_ratio_params(&mut rng)).collect()
}

/// `a₊ = √(ω₊/2)·(x₊ + i·p₊/ω₊)` and its three siblings written out from the
/// phase-space definitions.
fn oracle_ladder(p: &ModelParams) -> [FirstOrderOperator; 4] {
    let i = c(0.0, 1.0);
    let zero = c(0.0, 0.0);
    let (alpha, beta) = oracle_alpha_beta(p.big_gamma, p.delta);
    let (wp, wm) = oracle_omegas(p.m, p.gamma, p.k);
    let (g, d) = (p.big_gamma, p.delta);
    let op = |w: Complex64, sign: f64, xp: [Complex64; 2], pp: [Complex64; 2]| {
        // x = xp[0]·x + xp[1]·(−i∂y),  p = pp[0]·(−i∂x) + pp[1]·y
        let s = (w / 2.0).sqrt();
        let k = sign * i / w;
        FirstOrderOperator::new(s * xp[0], s * k * pp[1], s * k * pp[0] * -i, s * xp[1] * -i, zero)
    };
    let x_plus = [beta, alpha];
    let x_minus = [-d / (g * d.conj() - d * g.conj()), -g / (g * d.conj() - d * g.conj())];
    [
        op(wp, 1.0, x_plus, [g, d]),
        op(wm, 1.0, x_minus, [g.conj(), d.conj()]),
        op(wp, -1.0, x_plus, [g, d]),
        op(wm, -1.0, x_minus, [g.conj(), d.conj()]),
    ]
}

fn criterion_1_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut rng = sample_rng(SEED, 0);
    let draws: Vec<ModelParams> = (0..1000).map(|_| random_params(&mut rng)).collect();
    let mut worst_comm = 0.0f64;
    let mut worst_compat = 0.0f64;
    let mut failures = 0;
    for p in &draws {
        match build_pseudo_bosons(p) {
            Ok(q) => {
                let r = check_pseudo_boson_ccr(&q.a_plus, &q.a_minus, &q.b_plus, &q.b_minus, tol::ALG);
                worst_comm = worst_comm.max(r.max_commutator_residual());
                worst_compat = worst_compat.max(r.max_compatibility_diff());
                if !r.all_pass() {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok1 = failures == 0 && worst_comm <= 1e-12 && worst_compat <= 1e-12 && elapsed < 5.0;
    let first = (
        ok1,
        format!("1000 draws, {failures} failures, max commutator residual {worst_comm:.2e}, max compatibility diff {worst_compat:.2e}, {elapsed:.3} s"),
    );

    let mut worst_routes = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for p in &draws {
        worst_routes = worst_routes.max(construction_disagreement(p));
        if let Ok(q) = build_pseudo_bosons(p) {
            let scale = q.operators().iter().map(|o| o.max_abs()).fold(1.0, f64::max);
            let diff = q.operators().iter().zip(oracle_ladder(p)).map(|(a, b)| a.max_diff(&b)).fold(0.0, f64::max);
            worst_oracle = worst_oracle.max(diff / scale);
        }
    }
    let second = (
        worst_routes <= 1e-12 && worst_oracle <= 1e-12,
        format!("max route disagreement {worst_routes:.2e}, max relative deviation from hand-expanded operators {worst_oracle:.2e}"),
    );
    (first, second)
}

fn criterion_3() -> Outcome {
    let mut worst_q = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut worst_im = 0.0f64;
    let mut bad = 0;
    for p in ratio_draws() {
        let q = build_pseudo_bosons(&p).unwrap();
        match solve_vacuum(&q.a_plus, &q.a_minus, VacuumAnsatz::Diagonal) {
            Ok(sol) => {
                let (alpha, beta) = oracle_alpha_beta(p.big_gamma, p.delta);
                let (wp, _) = oracle_omegas(p.m, p.gamma, p.k);
                let k1 = beta * wp / (2.0 * p.big_gamma);
                let k2 = -p.delta / (2.0 * alpha * wp);
                let scale = 1.0f64.max(k1.norm()).max(k2.norm());
                let dq = ((sol.q.k1 - k1).norm().max((sol.q.k2 - k2).norm()).max(sol.q.k3.norm())) / scale;
                worst_q = worst_q.max(dq);
                worst_res = worst_res.max(sol.residual);
                worst_im = worst_im.max(sol.q.k1.im.abs()).max(sol.q.k2.im.abs());
            }
            Err(_) => bad += 1,
        }
    }
    let mut rng = sample_rng(SEED, 2);
    let mut min_defect = f64::INFINITY;
    let mut solved = 0;
    for _ in 0..200 {
        let p = random_violating_params(&mut rng, 1e-6);
        let q = build_pseudo_bosons(&p).unwrap();
        match solve_vacuum(&q.a_plus, &q.a_minus, VacuumAnsatz::Diagonal) {
            Err(VacuumError::NoSolution { consistency_defect, .. }) => min_defect = min_defect.min(consistency_defect),
            _ => solved += 1,
        }
    }
    let ok = bad == 0 && worst_q <= 1e-12 && worst_res <= 1e-12 && worst_im <= 1e-12 && solved == 0 && min_defect > 1e-6;
    (
        ok,
        format!(
            "ratio draws: {bad} failures, max relative |q - closed form| {worst_q:.2e}, max residual {worst_res:.2e}, max |Im k| {worst_im:.2e}; violating draws: {solved} solved, min consistency defect {min_defect:.2e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut verdicts = 0;
    let mut worst_identity = 0.0f64;
    let mut lower_matches = 0;
    let mut integrable = 0;
    for p in ratio_draws() {
        let cert = sign_obstruction(&p).unwrap();
        if cert.verdict {
            verdicts += 1;
        }
        let target = (p.delta / p.big_gamma).norm_sqr();
        worst_identity = worst_identity.max((cert.u * cert.v - target).abs() / target.max(1.0));
        if p.gamma > 0.0 && (cert.u * cert.v - (p.delta.norm() / p.gamma).powi(2)).abs() <= 1e-10 * target.max(1.0) {
            lower_matches += 1;
        }
        let q = build_pseudo_bosons(&p).unwrap();
        let sol = solve_vacuum(&q.a_plus, &q.a_minus, VacuumAnsatz::Diagonal).unwrap();
        if integrability_check(&sol.state(), &WeightedSpace::L2).integrable || cert.vacuum_integrable {
            integrable += 1;
        }
    }
    (
        verdicts == 200 && worst_identity <= 1e-10 && integrable == 0,
        format!(
            "verdict true {verdicts}/200, max |u*v - |delta/Gamma|^2| {worst_identity:.2e}, |delta/gamma|^2 matched {lower_matches}/200, integrable vacua {integrable}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut joint = 0;
    let mut missing_certificate = 0;
    let mut phi_expected = 0;
    let mut phi_found = 0;
    for p in ratio_draws() {
        let r = weighted_infeasibility(&p, 10.0, 101).unwrap();
        joint += r.joint_points;
        if !r.analytic_contradiction || r.analytic_certificate.is_empty() {
            missing_certificate += 1;
        }
        // a grid point strictly beyond both thresholds exists
        if r.phi_region_threshold[0] < 9.9 && r.phi_region_threshold[1] < 9.9 {
            phi_expected += 1;
            if r.phi_points > 0 {
                phi_found += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    (
        joint == 0 && missing_certificate == 0 && phi_expected > 0 && phi_found == phi_expected && elapsed < 30.0,
        format!(
            "200 draws on 101x101 over [0,10]^2: {joint} joint points, {missing_certificate} missing certificates, phi-only points found in {phi_found}/{phi_expected} reachable cases, {elapsed:.2} s"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    let mut not_integrable = 0;
    for p in ratio_draws() {
        let cert = sign_obstruction(&p).unwrap();
        let space = WeightedSpace::new((-cert.u).max(0.0) + 0.5, cert.v.max(0.0) + 0.5);
        let q = build_pseudo_bosons(&p).unwrap();
        let vac = solve_vacuum(&q.a_plus, &q.a_minus, VacuumAnsatz::Diagonal).unwrap().state();
        if !integrability_check(&vac, &space).integrable {
            not_integrable += 1;
        }
        let (wp, wm) = oracle_omegas(p.m, p.gamma, p.k);
        let e0 = (wp + wm) * 0.5;
        let hf = build_hamiltonian(&q).apply(&vac).unwrap();
        let target = vac.scale(e0);
        let mut diff = 0.0f64;
        for i in 0..=hf.degree().max(target.degree()) {
            for j in 0..=i {
                diff = diff.max((hf.coeff(i - j, j) - target.coeff(i - j, j)).norm());
            }
        }
        worst = worst.max(diff / target.max_abs_coeff().max(1.0));
    }
    (
        not_integrable == 0 && worst <= 1e-10,
        format!("200 draws in weights with normalisable vacuum: {not_integrable} not integrable, max |H phi00 - E0 phi00| {worst:.2e}"),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let real = general_ansatz_search(AnsatzMode::RealCoefficients, 10_000, 42).unwrap();
    let k3 = general_ansatz_search(AnsatzMode::K3Boundary, 10_000, 42).unwrap();
    let mut forced = 0;
    let grid = [(0.5, 0.5), (1.0, 2.0), (0.1, 3.0), (2.5, 0.7), (4.0, 4.0), (0.05, 0.02)];
    for (k1, k2) in grid {
        let cert = pure_gaussian_forcing(k1, k2).unwrap();
        if cert.forcing_confirmed && cert.kernel_dimension == 0 {
            forced += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = real.conclusion == SearchConclusion::NoSolutionConfirmed
        && k3.conclusion == SearchConclusion::NoSolutionConfirmed
        && real.best_residual.is_finite()
        && k3.best_residual.is_finite()
        && forced == grid.len()
        && elapsed < 60.0;
    (
        ok,
        format!(
            "real: {} accepted, best_residual {:.3e}; k3: {} accepted, best_residual {:.3e}; forcing confirmed {forced}/{}; {elapsed:.2} s",
            real.accepted,
            real.best_residual,
            k3.accepted,
            k3.best_residual,
            grid.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let fixture = FixtureModel::new(c(1.0, 1.0), c(0.5, 0.0));
    let sys = fixture.system();
    let run = run_framework(&sys, 5, 5, tol::EIGEN, tol::TRUNC).unwrap();
    let g = run.gram.matrix.matrix();
    let mut gram_defect = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let id = if i == j { 1.0 } else { 0.0 };
            gram_defect = gram_defect.max((g[(i, j)] - id).norm());
        }
    }
    let l = fixture.lambda1 * fixture.lambda1 + fixture.lambda2 * fixture.lambda2;
    let norm_dev = (run.gram.normalization - (l * 0.5).exp() * std::f64::consts::PI).norm();
    let eigen = run.eigen.iter().map(|e| e.max_residual).fold(0.0, f64::max);
    let product = run.s_operators.checks.product_defect;
    let sweep = truncation_sweep(&sys, &[2, 3, 4, 5]).unwrap();
    let monotone = monotone_with_floor(&sweep);
    let inter = run.intertwining.max_residual;
    let defects: Vec<String> = sweep.iter().map(|s| format!("{:.1e}", s.product_defect)).collect();
    (
        gram_defect <= 1e-8 && norm_dev <= 1e-10 && eigen <= 1e-10 && product <= 1e-6 && monotone && inter <= 1e-6,
        format!(
            "lambda=(1+i,1/2) at (5,5): |G - I| {gram_defect:.2e}, normalisation deviation {norm_dev:.2e}, eigen {eigen:.2e}, |S_Psi S_phi - I| {product:.2e}, sweep [{}] monotone {monotone}, intertwining {inter:.2e}",
            defects.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = sample_rng(SEED, 3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (f, g, space) = convergent_case(&mut rng, 0.3);
        let closed = inner_product(&f, &g, &space).unwrap();
        let (quad, _) = quadrature_inner_product(&f, &g, &space, 9.0, 401);
        worst = worst.max((closed - quad).norm() / quad.norm().max(1.0));
    }
    let mut divergent = 0;
    for _ in 0..100 {
        let (f, g, space): (GaussianPolynomial, GaussianPolynomial, WeightedSpace) = divergent_case(&mut rng);
        if matches!(inner_product(&f, &g, &space), Err(GaussianError::DivergentIntegral { .. })) {
            divergent += 1;
        }
    }
    (
        worst <= 1e-8 && divergent == 100,
        format!("100 convergent cases: max relative deviation from quadrature {worst:.2e}; DivergentIntegral on {divergent}/100 non-positive-definite cases"),
    )
}

fn criterion_10() -> Outcome {
    let params = ParamsFile::from_json(include_str!("../../../params/qdho_ratio.json")).unwrap();
    let fixture = ParamsFile::from_json(include_str!("../../../params/fixture.json")).unwrap();
    let mut configs = Vec::new();
    let mut search = RunConfig::new(Subcommand::NogoAnsatz, None);
    search.seed = 7;
    search.samples = 2000;
    search.mode = AnsatzMode::General;
    configs.push(search);
    configs.push(RunConfig::new(Subcommand::NogoWeighted, Some(params.clone())));
    configs.push(RunConfig::new(Subcommand::Vacuum, Some(params)));
    configs.push(RunConfig::new(Subcommand::SOperators, Some(fixture)));
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut identical = 0;
    for cfg in &configs {
        let a = run_subcommand(cfg, "2000-01-01T00:00:00Z").unwrap();
        let b = single.install(|| run_subcommand(cfg, "2030-12-31T23:59:59Z")).unwrap();
        let same_payload = serde_json::to_vec(&a.payload).unwrap() == serde_json::to_vec(&b.payload).unwrap();
        if same_payload && a.deterministic_bytes() == b.deterministic_bytes() {
            identical += 1;
        }
    }
    (
        identical == configs.len(),
        format!("{identical}/{} configurations byte-identical across runs, timestamps and thread counts", configs.len()),
    )
}

fn main() -> ExitCode {
    let (one, two) = criterion_1_2();
    let results = [
        one,
        two,
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let mut failed = 0;
    for (n, (ok, detail)) in results.iter().enumerate() {
        println!("{} criterion {}: {detail}", if *ok { "PASS" } else { "FAIL" }, n + 1);
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
