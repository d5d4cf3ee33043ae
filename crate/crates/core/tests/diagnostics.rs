use num_complex::Complex64;
use ptspectra::diagnostics::*;
use ptspectra::models::{PotentialModel, Scatterer};
use ptspectra::rootfind::RootOptions;
use ptspectra::sweep::find_critical_ss;

#[test]
fn delta_det_s_unimodular_off_singularity() {
    let m = PotentialModel::delta(0.0, 1.1107, 1.0).unwrap();
    let scan = det_s_scan(&m, 0.1, 2.0, 400, &DiagnosticOptions::default()).unwrap();
    let mut checked = 0;
    for p in scan.iter().filter(|p| (p.e - 0.617).abs() > 0.01) {
        let r = p.report.as_ref().unwrap();
        assert!((r.det_s.norm() - 1.0).abs() < 1e-6, "E = {}: {}", p.e, r.det_s.norm());
        checked += 1;
    }
    assert!(checked > 390);
}

#[test]
fn delta_det_s_limit() {
    let deltas = [1e-3, 1e-4, 1e-5];
    for v2 in [1.1107, std::f64::consts::PI / (2.0 * 2f64.sqrt())] {
        let m = PotentialModel::delta(0.0, v2, 1.0).unwrap();
        for p in det_s_limit(&m, 0.61685, &deltas).unwrap() {
            assert!(p.deviation() < 1e-3, "{p:?}");
        }
    }
}

// At an exact singularity the amplitude route loses about eps/δ² while
// the Jost route stays at rounding level.
#[test]
fn limit_routes_at_exact_singularity() {
    let base = PotentialModel::square_well(-5.0, 0.0, 2.0).unwrap();
    let c = find_critical_ss(&base, 19.0, 20.0, None, &RootOptions::default()).unwrap();
    let m = base.with_v2(c[0].v_star).unwrap();
    let rows = det_s_limit(&m, c[0].e_star, &[1e-3, 1e-4, 1e-5]).unwrap();
    for p in &rows {
        assert!(p.deviation() < 1e-8, "{p:?}");
    }
    assert!((rows[0].below_amplitudes - 1.0).abs() < 1e-5);
}

#[test]
fn free_det_s() {
    let m = PotentialModel::square_well(0.0, 0.0, 2.0).unwrap();
    for p in det_s_scan(&m, 0.1, 10.0, 50, &DiagnosticOptions::default()).unwrap() {
        let r = p.report.unwrap();
        assert!((r.det_s.norm() - 1.0).abs() < 1e-15);
        let t = r.amplitudes.t;
        assert!((r.det_s - t * t).norm() < 1e-15);
    }
}

#[test]
fn m_identity() {
    let scarf = PotentialModel::scarf2(-5.0, 19.75).unwrap();
    assert!(m_identity_check(&scarf, 0.2, 20.0, 100).unwrap() < 1e-8);
    let well = PotentialModel::square_well(5.0, 3.685, 2.0).unwrap();
    assert!(m_identity_check(&well, 0.1, 20.0, 100).unwrap() < 1e-8);
    let free = PotentialModel::delta(0.0, 0.0, 1.0).unwrap();
    assert!(m_identity_check(&free, 0.1, 20.0, 100).unwrap() < 1e-15);
}

#[test]
fn delta_invisibility_energies() {
    let m = PotentialModel::delta(0.0, 2.0, 1.0).unwrap();
    let found = invisibility_scan(&m, 0.5, 40.0, 4000, 1e-6).unwrap();
    let expect: Vec<f64> = (1..=4)
        .map(|n| (n * n) as f64 * std::f64::consts::PI.powi(2) / 4.0)
        .collect();
    assert!((expect[0] - 2.4674).abs() < 1e-4 && (expect[1] - 9.8696).abs() < 1e-4);
    let both: Vec<_> = found.iter().filter(|f| f.direction == Direction::Both).collect();
    assert_eq!(both.len(), 4, "{found:?}");
    for (f, e) in both.iter().zip(expect) {
        assert!((f.e - e).abs() < 1e-6);
    }
    // one-sided points are genuine: T = 1 with a single vanishing reflectance
    for f in found.iter().filter(|f| f.direction != Direction::Both) {
        let amp = m.amplitudes(f.e.sqrt()).unwrap();
        assert!((amp.transmittance() - 1.0).abs() < 1e-8);
        assert!(amp.reflectance_left().min(amp.reflectance_right()) < 1e-12);
    }
}

#[test]
fn scarf_at_most_one_unidirectional() {
    for (v1, v2) in [(-5.0, 19.75), (0.0, 10.0), (5.0, 12.0), (-2.0, 6.0)] {
        let m = PotentialModel::scarf2(v1, v2).unwrap();
        let found = invisibility_scan(&m, 0.05, 30.0, 3000, 1e-6).unwrap();
        let uni = found.iter().filter(|f| f.direction != Direction::Both).count();
        assert!(uni <= 1, "({v1}, {v2}): {found:?}");
    }
}

#[test]
fn free_invisibility_rejected() {
    let m = PotentialModel::delta(0.0, 0.0, 1.0).unwrap();
    assert!(invisibility_scan(&m, 0.1, 5.0, 100, 1e-6).is_err());
}

// T diverges on both sides of k* and of −k*.
#[test]
fn singularities_are_self_dual() {
    let opts = RootOptions::default();
    for base in [
        PotentialModel::delta(0.0, 0.0, 1.0).unwrap(),
        PotentialModel::square_well(-5.0, 0.0, 2.0).unwrap(),
        PotentialModel::scarf2(5.0, 0.0).unwrap(),
    ] {
        for c in find_critical_ss(&base, 0.0, 20.0, None, &opts).unwrap() {
            let m = base.with_v2(c.v_star).unwrap();
            let d = 1e-4;
            let t_right = m.amplitudes(c.k_star - d).unwrap().transmittance();
            let f_left = m.f_of_k(Complex64::new(-c.k_star + d, 0.0)).unwrap();
            let t_left = 1.0 / f_left.norm_sqr();
            assert!(t_right > 1e4 && t_left > 1e4, "{base:?} {c:?}: {t_right:e} {t_left:e}");
        }
    }
}
