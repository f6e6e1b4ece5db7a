mod common;

use common::{c, oracle_omegas};
use pbqdho::framework::{check_hamiltonian_spectrum, check_number_eigenrelations, model_system};
use pbqdho::gaussian::integrability_check;
use pbqdho::nogo::sign_obstruction;
use pbqdho::qdho::{build_params, build_pseudo_bosons, weighted_adjoint_quad};
use pbqdho::sampling::{random_params, random_ratio_params, sample_rng};
use pbqdho::vacuum::{ratio_condition_defect, solve_vacuum, VacuumAnsatz};
use pbqdho::{FirstOrderOperator, WeightedSpace};

/// Annihilation of `exp(−k1x² − k2y² − k3xy)` by `A` reads
/// `cx = 2k1·dx + k3·dy`, `cy = 2k2·dy + k3·dx`; eliminating `k1` between
/// two operators fixes `k3`.
fn oracle_cross_term(a: &FirstOrderOperator, b: &FirstOrderOperator) -> pbqdho::Complex64 {
    (a.cx * b.dx - b.cx * a.dx) / (a.dy * b.dx - b.dy * a.dx)
}

const WELL_CONDITIONED: f64 = 0.05;

#[test]
fn full_ansatz_matches_elimination() {
    let mut rng = sample_rng(5, 0);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let q = build_pseudo_bosons(&p).unwrap();
        let sol = solve_vacuum(&q.a_plus, &q.a_minus, VacuumAnsatz::Full).unwrap();
        let k3 = oracle_cross_term(&q.a_plus, &q.a_minus);
        let k1 = (q.a_plus.cx - k3 * q.a_plus.dy) / (2.0 * q.a_plus.dx);
        let k2 = (q.a_plus.cy - k3 * q.a_plus.dx) / (2.0 * q.a_plus.dy);
        let scale = k1.norm().max(k2.norm()).max(k3.norm()).max(1.0);
        assert!((sol.q.k3 - k3).norm() <= 1e-9 * scale, "{} vs {k3}", sol.q.k3);
        assert!((sol.q.k1 - k1).norm() <= 1e-9 * scale);
        assert!((sol.q.k2 - k2).norm() <= 1e-9 * scale);
        let defect = ratio_condition_defect(&p).unwrap().norm();
        if defect > 1e-6 {
            assert!(k3.norm() > 1e-9, "cross term vanished off the ratio condition");
        }
        assert!(!integrability_check(&sol.state(), &WeightedSpace::L2).integrable);
    }
}

#[test]
fn hamiltonian_spectrum_on_low_ladder_states() {
    let mut rng = sample_rng(6, 0);
    let mut i = 0;
    while i < 20 {
        let p = if i % 2 == 0 { random_ratio_params(&mut rng) } else { random_params(&mut rng) };
        if p.det.norm() < WELL_CONDITIONED {
            continue;
        }
        i += 1;
        let q = build_pseudo_bosons(&p).unwrap();
        let sys = model_system(&q, WeightedSpace::L2);
        let phi = sys.phi_family(4, 4).unwrap();
        let report = check_hamiltonian_spectrum(&q, &phi, 1e-10).unwrap();
        let (wp, wm) = oracle_omegas(p.m, p.gamma, p.k);
        for e in &report.entries {
            let expected = wp * e.n as f64 + wm * e.l as f64 + (wp + wm) * 0.5;
            assert!((e.eigenvalue - expected).norm() <= 1e-12 * expected.norm().max(1.0));
        }
        assert!(report.passed, "max residual {:e}", report.max_residual);
    }
}

#[test]
fn undamped_spectrum_is_real() {
    let p = build_params(1.3, 0.0, 2.0, c(0.8, 0.3), c(-0.2, 1.1)).unwrap();
    let q = build_pseudo_bosons(&p).unwrap();
    let phi = model_system(&q, WeightedSpace::L2).phi_family(3, 3).unwrap();
    let report = check_hamiltonian_spectrum(&q, &phi, 1e-10).unwrap();
    assert!(report.passed);
    let omega = (2.0f64 / 1.3).sqrt();
    for e in &report.entries {
        assert_eq!(e.eigenvalue.im, 0.0);
        assert!((e.eigenvalue.re - omega * (e.n + e.l + 1) as f64).abs() <= 1e-12);
    }
}

#[test]
fn weighted_space_normalises_one_family_only() {
    let mut rng = sample_rng(8, 0);
    let mut checked = 0;
    while checked < 50 {
        let p = random_ratio_params(&mut rng);
        // ladder products lose digits like |α|·|β| near the degenerate boundary
        if p.det.norm() < WELL_CONDITIONED {
            continue;
        }
        checked += 1;
        let cert = sign_obstruction(&p).unwrap();
        let space = WeightedSpace::new((-cert.u).max(0.0) + 0.25, cert.v.max(0.0) + 0.25);
        let q = build_pseudo_bosons(&p).unwrap();
        let sys = model_system(&q, space);
        let phi = sys.phi_family(2, 2).unwrap();
        let psi = sys.psi_family(2, 2).unwrap();
        for f in phi.states() {
            assert!(integrability_check(f, &space).integrable);
        }
        for f in psi.states() {
            assert!(!integrability_check(f, &space).integrable);
        }
        let reports = check_number_eigenrelations(&sys, &phi, &psi, 1e-10).unwrap();
        assert!(reports.iter().all(|r| r.passed), "{:?}", reports.iter().map(|r| r.max_residual).collect::<Vec<_>>());
    }
}

#[test]
fn weighted_adjoint_closed_forms() {
    let mut rng = sample_rng(9, 0);
    let space = WeightedSpace::new(0.7, 1.9);
    let mut quoted_off = 0;
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let q = build_pseudo_bosons(&p).unwrap();
        let w = weighted_adjoint_quad(&q, &space);
        let scale = q.operators().iter().map(|o| o.max_abs()).fold(1.0, f64::max);
        assert!(w.corrected_diff.iter().all(|d| *d <= 1e-12 * scale), "{:?}", w.corrected_diff);
        assert!(w.quoted_diff[..3].iter().all(|d| *d <= 1e-12 * scale));
        if w.quoted_diff[3] > 1e-8 {
            quoted_off += 1;
        }
    }
    assert!(quoted_off > 90);
}
