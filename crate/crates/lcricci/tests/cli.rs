use std::process::{Command, Output};

use lcricci::report::render_table;
use serde_json::Value;

fn lcricci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcricci")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_metrics_names_the_zoo() {
    let o = lcricci(&["list-metrics"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["flat", "hopf0", "hopfp", "fs", "inoue-k", "conformal-flat", "custom("] {
        assert!(s.contains(name), "{name} missing from\n{s}");
    }
    assert!(s.contains("n >= 2"));
}

#[test]
fn tensor_dump_of_perturbed_hopf_at_unit_point() {
    let o = lcricci(&["tensor", "--metric", "hopfp:n=2", "--at", "1+0i,0+0i"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["g"]["re"], serde_json::json!([[1.0, 0.0], [0.0, 0.5]]));
    assert_eq!(v["g"]["im"], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));
    let lc = v["lc_ricci"]["re"].as_array().unwrap();
    for row in lc {
        for x in row.as_array().unwrap() {
            assert!(x.as_f64().unwrap().abs() < 1e-8);
        }
    }
    for key in ["g_inv", "gamma_hol", "gamma_mixed", "chern_curvature", "lc_curvature", "chern_scalar", "lc_scalar"] {
        assert!(v.get(key).is_some(), "{key} missing");
    }
    assert!(v["gamma_mixed"]["indices"].as_str().unwrap().contains("Gamma^k"));
    assert!((v["chern_scalar"]["re"].as_f64().unwrap() - 4.0).abs() < 1e-10);
}

#[test]
fn check_on_conformal_flat_passes_and_table_renders_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lcricci(&[
        "check",
        "key-identity",
        "--metric",
        "conformal(flat:n=2; f=x1)",
        "--points",
        "20",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["overall_pass"], Value::Bool(true));
    assert_eq!(json["config"]["points"], 20);
    assert_eq!(render_table(&json), stdout(&o));
}

#[test]
fn single_check_id_is_selectable() {
    let o = lcricci(&["check", "hopf.lc_ricci_flat", "--metric", "hopfp:n=3", "--points", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["hopf.lc_ricci_flat"]);
}

#[test]
fn failing_check_exits_one() {
    let o = lcricci(&["check", "balanced.hopf_nonzero", "--metric", "hopf0:n=2", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    // a tolerance override far below the residual turns the key identity into a failure
    let o = lcricci(&["check", "key-identity", "--metric", "hopf0:n=2", "--points", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overall: FAIL"));
}

#[test]
fn usage_errors_exit_two_before_computing() {
    let cases: &[&[&str]] = &[
        &["check", "key-identity", "--metric", "flat:n=2", "--points", "0"],
        &["check", "key-identity", "--metric", "flat:n=2", "--tol", "-1"],
        &["check", "key-identity", "--metric", "flat:n=2", "--step", "0"],
        &["check", "no-such-suite", "--metric", "flat:n=2"],
        &["check", "key-identity", "--metric", "hopf7"],
        &["check", "key-identity", "--metric", "custom(n=2; g11=1; g22=1)"],
        &["check", "conformal-lemma", "--metric", "flat:n=2"],
        &["tensor", "--metric", "flat:n=2", "--at", "1+0i"],
        &["tensor", "--metric", "flat:n=2", "--at", "1+0i,zz"],
        &["tensor", "--metric", "flat:n=2", "--at", "1,0", "--deriv", "sideways"],
        &["suite", "all"],
        &["integrate", "--metric", "flat:n=2"],
        &["integrate", "--metric", "hopfp:n=2", "--integrand", "ddbar-f"],
        &["bogus"],
    ];
    for args in cases {
        let o = lcricci(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty(), "{args:?} printed output");
    }
}

#[test]
fn fd_mode_handles_custom_metrics() {
    let o = lcricci(&[
        "check",
        "key-identity",
        "--metric",
        "custom(n=2; g11=2+x1^2; g12=0.1*y2, 0.2*x1; g22=1+absq)",
        "--deriv",
        "fd",
        "--points",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn factor_flag_rescales_the_metric() {
    let plain = lcricci(&["tensor", "--metric", "flat:n=2", "--at", "0.5+0i,0+0i", "--factor", "x1"]);
    let spelled = lcricci(&["tensor", "--metric", "conformal(flat:n=2; f=x1)", "--at", "0.5+0i,0+0i"]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(stdout(&plain), stdout(&spelled));
    let v: Value = serde_json::from_str(&stdout(&plain)).unwrap();
    assert!((v["g"]["re"][0][0].as_f64().unwrap() - 0.5f64.exp()).abs() < 1e-15);
}

#[test]
fn integrate_echoes_convention_and_resolution() {
    let a = lcricci(&["integrate", "--metric", "hopfp:n=2", "--integrand", "scalar", "--resolution", "4"]);
    let b = lcricci(&[
        "integrate",
        "--metric",
        "hopfp:n=2",
        "--integrand",
        "scalar",
        "--resolution",
        "4",
        "--convention",
        "omega-n-factorial",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let a: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(a["resolution"], 4);
    assert_eq!(a["convention"], "omega^n");
    assert_eq!(b["convention"], "omega^n/n!");
    let (va, vb) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
    assert!((va / vb - 2.0).abs() < 1e-12);
}

#[test]
fn integrate_constant_matches_annulus_volume() {
    let o = lcricci(&["integrate", "--metric", "hopf0:n=2", "--integrand", "constant", "--resolution", "8"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let exact = 15.0 * std::f64::consts::PI.powi(2) / 32.0;
    assert!((v["value"].as_f64().unwrap() / exact - 1.0).abs() < 1e-6);
}
