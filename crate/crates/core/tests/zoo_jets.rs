use lcricci_core::jet::JetOptions;
use lcricci_core::linalg::{cholesky, CMat};
use lcricci_core::metric::{parse_spec, MetricSpec};
use lcricci_core::point::ChartPoint;
use lcricci_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Point with every `|z_k|` in `[0.3, 0.9]`, so `0.3 ≤ |z|` and the Hopf charts are safe.
fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ChartPoint {
    let coords = (0..n)
        .map(|_| C64::from_polar(rng.random_range(0.3..0.9), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    ChartPoint::new(coords).unwrap()
}

/// Hand-typed entries, independent of the library's zoo module.
fn oracle(name: &str, p: &ChartPoint) -> CMat {
    let n = p.dim();
    let z = p.coords();
    let r: f64 = z.iter().map(|w| w.norm_sqr()).sum();
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    CMat::from_fn(n, |a, b| match name {
        "flat" => c(d(a, b), 0.0),
        "hopf0" => c(d(a, b) / r, 0.0),
        "hopfp" => {
            let nf = n as f64;
            c((nf - 1.0) / nf * d(a, b) / r, 0.0) + z[a].conj() * z[b] / (nf * r * r)
        }
        "fs" => {
            let s = 1.0 + r;
            c(d(a, b) / s, 0.0) - z[a].conj() * z[b] / (s * s)
        }
        _ => unreachable!(),
    })
}

#[test]
fn zoo_entries_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["flat", "hopf0", "hopfp", "fs"] {
        for n in 2..=4 {
            let spec = parse_spec(&format!("{name}:n={n}")).unwrap();
            for _ in 0..50 {
                let p = random_point(&mut rng, n);
                let g = spec.matrix_at(&p).unwrap();
                assert!(g.max_abs_diff(&oracle(name, &p)) < 1e-14, "{name} n={n} at {p}");
            }
        }
    }
}

#[test]
fn fd_error_against_analytic_jet_shrinks_quadratically() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["hopf0:n=2", "hopfp:n=2", "hopfp:n=3", "fs:n=2", "conformal(flat:n=2; f=sin(x1)*y2)"] {
        let spec = parse_spec(name).unwrap();
        let p = random_point(&mut rng, spec.dim());
        let exact = spec.jet_at(&p, &JetOptions::analytic()).unwrap();
        let err = |h: f64| {
            let fd = spec.jet_at(&p, &JetOptions::fd().with_step(h).first_order()).unwrap();
            let e_hol = exact.d_hol.iter().zip(&fd.d_hol).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
            let e_anti = exact.d_antihol.iter().zip(&fd.d_antihol).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
            e_hol.max(e_anti)
        };
        let ratio = err(1e-2) / err(5e-3);
        assert!((3.5..=4.5).contains(&ratio), "{name}: ratio {ratio}");
    }
}

#[test]
fn thousand_points_are_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let specs: Vec<MetricSpec> = ["flat:n=2", "hopf0:n=2", "hopfp:n=2", "hopfp:n=3", "fs:n=3", "conformal-flat:n=2"]
        .iter()
        .map(|s| parse_spec(s).unwrap())
        .collect();
    for spec in &specs {
        for _ in 0..1000 {
            let p = random_point(&mut rng, spec.dim());
            let g = spec.matrix_at(&p).unwrap();
            assert!(g.hermitian_defect() < 1e-14);
            assert!(cholesky(&g).is_some(), "{spec} not positive definite at {p}");
        }
    }
}

#[test]
fn hopf_metrics_scale_by_four_under_halving() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["hopf0:n=2", "hopfp:n=2", "hopf0:n=3", "hopfp:n=3"] {
        let spec = parse_spec(name).unwrap();
        for _ in 0..100 {
            let p = random_point(&mut rng, spec.dim());
            let g = spec.matrix_at(&p).unwrap();
            let g_half = spec.matrix_at(&p.scaled(0.5)).unwrap();
            assert!(g_half.max_abs_diff(&g.scale_re(4.0)) < 1e-12 * g.max_abs() * 4.0);
        }
    }
}

#[test]
fn perturbed_hopf_at_unit_point() {
    let spec = parse_spec("hopfp:n=2").unwrap();
    let p = ChartPoint::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let g = spec.matrix_at(&p).unwrap();
    assert!(g.max_abs_diff(&CMat::from_real_diag(&[1.0, 0.5])) < 1e-15);
}
