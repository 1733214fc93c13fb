use lcricci_core::curvature::curvature_at;
use lcricci_core::hodge::{dbar_dbar_star, dbar_star_omega_gamma, dbar_star_omega_lambda, torsion_form};
use lcricci_core::jet::JetOptions;
use lcricci_core::linalg::CMat;
use lcricci_core::metric::{evaluate_metric, parse_spec};
use lcricci_core::point::ChartPoint;
use lcricci_core::{C64, I};

fn pt(coords: &[(f64, f64)]) -> ChartPoint {
    ChartPoint::new(coords.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap()
}

#[test]
fn standard_hopf_torsion_at_unit_point() {
    let spec = parse_spec("hopf0:n=2").unwrap();
    let m = evaluate_metric(&spec, &pt(&[(1.0, 0.0), (0.0, 0.0)]), &JetOptions::analytic()).unwrap();
    let t = torsion_form(&m);
    // ∂_k g_{i j̄} with g = δ/|z|²: at (1,0) only ∂_1 is nonzero, equal to −δ_{ij}
    assert!((t.get(0, 1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
    assert!((t.get(1, 0, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
    let a = dbar_star_omega_lambda(&m);
    assert!((a.coeff[0] + I).norm() < 1e-15);
    assert!(a.coeff[1].norm() < 1e-15);
}

#[test]
fn perturbed_hopf_closed_forms_at_unit_point() {
    let spec = parse_spec("hopfp:n=2").unwrap();
    let p = pt(&[(1.0, 0.0), (0.0, 0.0)]);
    let opts = JetOptions::analytic();
    let b = curvature_at(&spec, &p, &opts).unwrap();
    assert!(b.lc_ricci().max_abs() < 1e-8);
    assert!(b.chern_ricci.coeff.max_abs_diff(&CMat::from_real_diag(&[0.0, 2.0])) < 1e-12);
    assert!((b.chern_scalar - 4.0).abs() < 1e-12);
    let a = dbar_star_omega_gamma(&b.connection);
    assert!((a.coeff[0] - C64::new(0.0, -2.0)).norm() < 1e-12);
    assert!(a.coeff[1].norm() < 1e-12);
    let bb = dbar_dbar_star(&spec, &p, &opts).unwrap();
    assert!(bb.coeff.max_abs_diff(&CMat::from_real_diag(&[0.0, 2.0])) < 1e-8);
}

#[test]
fn fubini_study_ricci_is_twice_the_metric_at_origin_in_dimension_one() {
    let spec = parse_spec("fs:n=1").unwrap();
    let b = curvature_at(&spec, &ChartPoint::origin(1), &JetOptions::analytic()).unwrap();
    assert!((b.chern_ricci.coeff[(0, 0)] - C64::new(2.0, 0.0)).norm() < 1e-12);
    assert!(b.connection.max_abs_mixed() < 1e-15);
}

#[test]
fn standard_hopf_chern_scalar_is_n_times_n_minus_one() {
    for n in 2..=4 {
        let spec = parse_spec(&format!("hopf0:n={n}")).unwrap();
        let mut coords = vec![(0.3, -0.2); n];
        coords[0] = (0.7, 0.1);
        let b = curvature_at(&spec, &pt(&coords), &JetOptions::analytic()).unwrap();
        let nf = n as f64;
        assert!((b.chern_scalar - nf * (nf - 1.0)).abs() < 1e-10, "n={n}: {}", b.chern_scalar);
    }
}
