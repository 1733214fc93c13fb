//! One line per acceptance criterion; every threshold below is fixed here, not read from the reports.

use std::time::{Duration, Instant};

use lcricci::report::{CheckRecord, Status, VerificationReport};
use lcricci::sampling::seeded_factor;
use lcricci::suite::{run_suite, SuiteConfig, SuiteName};
use lcricci_core::jet::DerivMode;

fn sweep_metrics() -> Vec<String> {
    let mut v: Vec<String> =
        ["flat:n=2", "conformal-flat:n=2", "hopf0:n=2", "hopfp:n=2", "fs:n=2"].map(String::from).to_vec();
    for s in 0..5 {
        let f = seeded_factor(2, 1000 + s);
        v.push(format!("conformal(flat:n=2; f={f})"));
        v.push(format!("conformal(hopf0:n=2; f={f})"));
    }
    v
}

fn run(suite: SuiteName, metrics: Vec<String>, points: usize, mode: DerivMode) -> VerificationReport {
    let config = SuiteConfig { points, mode, ..SuiteConfig::new(suite, metrics) };
    run_suite(&config).expect("suite runs")
}

/// Largest residual of `id` across every metric, plus how many records carried it.
/// Error records count as infinite.
fn worst(report: &VerificationReport, id: &str) -> (f64, usize) {
    let recs: Vec<&CheckRecord> = report.checks.iter().filter(|c| c.check_id == id).collect();
    let m = recs
        .iter()
        .map(|c| match (c.status, c.max_residual) {
            (Status::Error, _) | (_, None) => f64::INFINITY,
            (_, Some(x)) if x.is_nan() => f64::INFINITY,
            (_, Some(x)) => x,
        })
        .fold(0.0, f64::max);
    (m, recs.len())
}

struct Line {
    ok: bool,
    text: String,
}

fn bound(report: &VerificationReport, id: &str, tol: f64, expected_records: usize) -> (bool, String) {
    let (m, k) = worst(report, id);
    (m <= tol && k == expected_records, format!("{id} max {m:.3e} <= {tol:e} over {k}/{expected_records} metrics"))
}

fn criterion(n: usize, title: &str, parts: Vec<(bool, String)>, elapsed: Option<(Duration, f64)>) -> Line {
    let mut ok = parts.iter().all(|(p, _)| *p);
    let mut detail: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
    if let Some((d, limit)) = elapsed {
        let secs = d.as_secs_f64();
        ok &= secs <= limit;
        detail.push(format!("{secs:.2}s <= {limit}s"));
    }
    let text = format!("{} {n}: {title}: {}", if ok { "PASS" } else { "FAIL" }, detail.join("; "));
    println!("{text}");
    Line { ok, text }
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let sweep = sweep_metrics();
    let sw = sweep.len();

    // 1
    let t = Instant::now();
    let hopfp = vec!["hopfp:n=2".to_string(), "hopfp:n=3".to_string()];
    let a = run(SuiteName::HopfClosedForms, hopfp.clone(), 100, DerivMode::Analytic);
    let f = run(SuiteName::HopfClosedForms, hopfp, 100, DerivMode::FiniteDifference);
    let el = t.elapsed();
    lines.push(criterion(
        1,
        "perturbed Hopf metric is Levi-Civita Ricci-flat (n = 2, 3)",
        vec![bound(&a, "hopf.lc_ricci_flat", 1e-6, 2), bound(&f, "hopf.lc_ricci_flat", 1e-4, 2)],
        Some((el, 10.0)),
    ));

    // 2 and 7
    let t = Instant::now();
    let key = run(SuiteName::KeyIdentity, sweep.clone(), 100, DerivMode::Analytic);
    let el = t.elapsed();
    lines.push(criterion(
        2,
        "Ricci relation, direct vs identity",
        vec![bound(&key, "ricci.lc_direct_vs_identity", 1e-5, sw)],
        Some((el, 60.0)),
    ));

    // 3
    let sc = run(SuiteName::ScalarIdentity, sweep.clone(), 100, DerivMode::Analytic);
    lines.push(criterion(
        3,
        "scalar relation and inner-product equality",
        vec![
            bound(&sc, "scalar.lc_chern_relation", 1e-5, sw),
            bound(&sc, "inner.dd_star_vs_dbar_dbar_star", 1e-5, sw),
            bound(&sc, "scalar.inner_product_imag", 1e-8, sw),
        ],
        None,
    ));

    // 4
    let adj = run(SuiteName::AdjointAgreement, sweep.clone(), 100, DerivMode::Analytic);
    lines.push(criterion(
        4,
        "dbar-star routes agree; perturbed Hopf value is -n i dlog|z|^2",
        vec![bound(&adj, "dbar_star.lambda_vs_gamma", 1e-6, sw), bound(&adj, "dbar_star.hopf_closed_form", 1e-6, 1)],
        None,
    ));

    // 5
    let conformal: Vec<String> = sweep.iter().filter(|m| m.starts_with("conformal(")).cloned().collect();
    let cl = run(SuiteName::ConformalLemma, conformal.clone(), 100, DerivMode::Analytic);
    lines.push(criterion(
        5,
        "conformal change of dbar-star and dbar dbar-star",
        vec![
            bound(&cl, "conformal.dbar_star", 1e-5, conformal.len()),
            bound(&cl, "conformal.dbar_dbar_star", 1e-4, conformal.len()),
        ],
        None,
    ));

    // 6
    let k = run(SuiteName::KahlerDegeneracy, vec!["flat:n=2".into(), "fs:n=2".into()], 100, DerivMode::Analytic);
    lines.push(criterion(
        6,
        "Kähler degeneracy on flat and Fubini-Study",
        vec![bound(&k, "kahler.gamma_mixed", 1e-8, 2), bound(&k, "kahler.lc_ricci_vs_chern_ricci", 1e-6, 2)],
        None,
    ));

    // 7
    lines.push(criterion(
        7,
        "Chern-Ricci trace route vs log-det route",
        vec![bound(&key, "chern_ricci.trace_vs_logdet", 1e-6, sw)],
        None,
    ));

    // 8
    let t = Instant::now();
    let ii = run(SuiteName::IntegralIdentities, vec!["hopf0:n=2".into(), "hopfp:n=2".into()], 1, DerivMode::Analytic);
    let el = t.elapsed();
    lines.push(criterion(
        8,
        "total scalar curvature integrals",
        vec![
            bound(&ii, "integral.total_scalar", 1e-3, 2),
            bound(&ii, "integral.gauduchon_gate", 1e-6, 2),
            bound(&ii, "integral.lc_flat_total_scalar", 1e-3, 1),
            bound(&ii, "integral.refinement", 1e-2, 2),
        ],
        Some((el, 120.0)),
    ));

    // 9
    let ino = run(SuiteName::InoueCurvature, vec!["inoue-k".into()], 20, DerivMode::Analytic);
    let strip_points = ino.checks.iter().find(|c| c.check_id == "inoue.profile").map_or(0, |c| c.points);
    lines.push(criterion(
        9,
        "Inoue canonical weight curvature",
        vec![
            bound(&ino, "inoue.unit_point", 1e-8, 1),
            bound(&ino, "inoue.profile", 1e-8, 1),
            (strip_points == 20, format!("{strip_points} strip points")),
        ],
        None,
    ));

    // 10
    let mut same = true;
    let mut compared = 0;
    for suite in SuiteName::CONCRETE {
        let (metrics, points) = match suite {
            SuiteName::IntegralIdentities => (vec!["hopfp:n=2".to_string()], 1),
            SuiteName::InoueCurvature => (vec!["inoue-k".to_string()], 20),
            _ => (sweep.clone(), 10),
        };
        let config = SuiteConfig { points, seed: 42, resolution: Some(2), ..SuiteConfig::new(suite, metrics) };
        let a = run_suite(&config).unwrap().to_json();
        let b = run_suite(&config).unwrap().to_json();
        same &= a == b;
        compared += 1;
    }
    lines.push(criterion(10, "byte-identical reports on re-run", vec![(same, format!("{compared} suites"))], None));

    let failed: Vec<&str> = lines.iter().filter(|l| !l.ok).map(|l| l.text.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
