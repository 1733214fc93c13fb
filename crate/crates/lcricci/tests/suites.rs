use lcricci::report::Status;
use lcricci::sampling::{sample_points, Region};
use lcricci::suite::{default_metric_set, run_suite, suite_for_check, SuiteConfig, SuiteError, SuiteName, COVERAGE};
use lcricci_core::metric::parse_spec;

fn config(suite: SuiteName, metrics: &[&str], points: usize) -> SuiteConfig {
    SuiteConfig { points, ..SuiteConfig::new(suite, metrics.iter().map(|s| s.to_string()).collect()) }
}

#[test]
fn flat_key_identity_is_exact() {
    let r = run_suite(&config(SuiteName::KeyIdentity, &["flat:n=2"], 10)).unwrap();
    assert!(r.overall_pass);
    for c in &r.checks {
        assert_eq!(c.points, 10);
        assert!(c.max_residual.unwrap() < 1e-12, "{}: {:?}", c.check_id, c.max_residual);
    }
}

#[test]
fn adjoint_routes_agree_on_conformal_hopf() {
    let r = run_suite(&config(SuiteName::AdjointAgreement, &["conformal(hopf0:n=2; f=sin(x1))"], 50)).unwrap();
    assert!(r.overall_pass);
    let c = r.checks.iter().find(|c| c.check_id == "dbar_star.lambda_vs_gamma").unwrap();
    assert!(c.max_residual.unwrap() <= 1e-6);
    // the normalization pin runs first
    assert_eq!(r.checks[0].check_id, "dbar_star.lambda_normalization_pin");
}

#[test]
fn unsupported_pairs_are_reported_not_skipped() {
    let r = run_suite(&config(SuiteName::HopfClosedForms, &["flat:n=2", "hopfp:n=2"], 5)).unwrap();
    let flat: Vec<_> = r.checks.iter().filter(|c| c.metric == "flat:n=2").collect();
    assert_eq!(flat.len(), 1);
    assert_eq!(flat[0].status, Status::NotApplicable);
    assert!(r.overall_pass);
}

#[test]
fn empty_applicable_set_is_an_error() {
    let e = run_suite(&config(SuiteName::InoueCurvature, &["flat:n=2"], 5)).unwrap_err();
    assert!(matches!(e, SuiteError::NothingApplicable(_)));
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_suite(&config(SuiteName::KeyIdentity, &["flat:n=2"], 0)).is_err());
    assert!(run_suite(&config(SuiteName::KeyIdentity, &["nope"], 3)).is_err());
    let tol = SuiteConfig { tolerance: Some(0.0), ..config(SuiteName::KeyIdentity, &["flat:n=2"], 3) };
    assert!(run_suite(&tol).is_err());
    assert!("not-a-suite".parse::<SuiteName>().is_err());
}

#[test]
fn overall_pass_is_the_conjunction() {
    let strict = SuiteConfig { tolerance: Some(1e-300), ..config(SuiteName::KeyIdentity, &["flat:n=2", "hopfp:n=2"], 5) };
    let r = run_suite(&strict).unwrap();
    assert!(!r.overall_pass);
    assert_eq!(r.overall_pass, r.checks.iter().all(|c| c.pass));
}

#[test]
fn balanced_residual_of_hopf_is_bounded_away_from_zero() {
    let r = run_suite(&config(SuiteName::GauduchonBalanced, &["hopf0:n=2", "hopfp:n=2", "hopfp:n=3"], 40)).unwrap();
    assert!(r.overall_pass, "{}", r.render_table());
    for c in r.checks.iter().filter(|c| c.check_id == "balanced.hopf_nonzero") {
        assert!(c.min_residual.unwrap() > 0.1);
    }
}

#[test]
fn default_battery_parses_and_every_check_has_coverage() {
    let set = default_metric_set();
    assert_eq!(set.len(), 18);
    for m in &set {
        parse_spec(m).unwrap();
    }
    for (id, _) in COVERAGE {
        assert!(suite_for_check(id).is_some(), "{id}");
    }
    let r = run_suite(&config(SuiteName::KahlerDegeneracy, &["flat:n=2", "fs:n=2"], 3)).unwrap();
    for c in &r.checks {
        assert!(r.coverage.iter().any(|k| k.check_id == c.check_id));
    }
}

#[test]
fn sampling_keeps_clear_of_domain_boundaries() {
    let step = 1e-4 * 1.4;
    for (spec, region) in [
        ("hopfp:n=3", Region::Annulus { inner: 0.6, outer: 1.4 }),
        ("inoue-k", Region::Strip { im_lo: 0.5, im_hi: 2.0 }),
    ] {
        let spec = parse_spec(spec).unwrap();
        assert_eq!(Region::for_spec(&spec), region);
        for p in sample_points(region, spec.dim(), 2000, 9) {
            assert!(spec.domain().boundary_distance(&p) > 4.0 * step);
            if let Region::Annulus { inner, outer } = region {
                assert!(p.norm() >= inner - 1e-12 && p.norm() <= outer + 1e-12);
            }
        }
    }
}

#[test]
fn different_seeds_give_different_points() {
    let a = sample_points(Region::Polydisc { radius: 1.0 }, 2, 5, 1);
    let b = sample_points(Region::Polydisc { radius: 1.0 }, 2, 5, 2);
    assert_ne!(a, b);
    assert_eq!(a, sample_points(Region::Polydisc { radius: 1.0 }, 2, 5, 1));
}
