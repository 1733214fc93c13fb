//! Labelled tensor dumps at a single point.

use lcricci_core::curvature::{curvature_at, CurvatureBundle};
use lcricci_core::hodge::{d_d_star, dbar_dbar_star, dbar_star_omega_gamma, dbar_star_omega_lambda, torsion_form};
use lcricci_core::jet::JetOptions;
use lcricci_core::linalg::CMat;
use lcricci_core::metric::MetricSpec;
use lcricci_core::point::ChartPoint;
use lcricci_core::{Result, C64};
use serde_json::{json, Map, Value};

/// A complex array split into real and imaginary parts with an index legend.
fn labelled(indices: &str, re: Value, im: Value) -> Value {
    json!({ "indices": indices, "re": re, "im": im })
}

fn mat(m: &CMat, indices: &str) -> Value {
    let part = |f: fn(&C64) -> f64| Value::from(m.rows().map(|r| r.iter().map(f).collect::<Vec<f64>>()).collect::<Vec<_>>());
    labelled(indices, part(|c| c.re), part(|c| c.im))
}

fn vec1(v: &[C64], indices: &str) -> Value {
    labelled(indices, v.iter().map(|c| c.re).collect(), v.iter().map(|c| c.im).collect())
}

fn cube(n: usize, indices: &str, f: impl Fn(usize, usize, usize) -> C64) -> Value {
    let part = |g: fn(C64) -> f64| {
        Value::from(
            (0..n).map(|a| (0..n).map(|b| (0..n).map(|c| g(f(a, b, c))).collect::<Vec<f64>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        )
    };
    labelled(indices, part(|c| c.re), part(|c| c.im))
}

fn quartic(n: usize, indices: &str, f: impl Fn(usize, usize, usize, usize) -> C64) -> Value {
    let part = |g: fn(C64) -> f64| {
        Value::from(
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| (0..n).map(|c| (0..n).map(|d| g(f(a, b, c, d))).collect::<Vec<f64>>()).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        )
    };
    labelled(indices, part(|c| c.re), part(|c| c.im))
}

fn scalar(re: f64, im: f64) -> Value {
    json!({ "re": re, "im": im })
}

/// Every computed object at `p`, as JSON. Indices are zero-based.
pub fn tensor_dump(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions) -> Result<Value> {
    let b: CurvatureBundle = curvature_at(spec, p, opts)?;
    let n = spec.dim();
    let m = &b.metric;
    let bb = dbar_dbar_star(spec, p, opts)?;
    let t = torsion_form(m);
    let mut o = Map::new();
    o.insert("metric".into(), Value::from(spec.to_string()));
    o.insert("point".into(), vec1(p.coords(), "[k] = z^k"));
    o.insert("g".into(), mat(m.g.matrix(), "[i][j] = g_{i jbar}"));
    o.insert("g_inv".into(), mat(m.g_inv.matrix(), "[i][j] = g^{i jbar}"));
    o.insert("det".into(), Value::from(m.det));
    o.insert("gamma_hol".into(), cube(n, "[k][i][j] = Gamma^k_{i j}", |k, i, j| b.connection.hol(k, i, j)));
    o.insert("gamma_mixed".into(), cube(n, "[k][i][j] = Gamma^k_{ibar j}", |k, i, j| b.connection.mixed(k, i, j)));
    o.insert("torsion".into(), cube(n, "[k][i][j] = T_{k i jbar}", |k, i, j| t.get(k, i, j)));
    o.insert("chern_curvature".into(), quartic(n, "[i][j][k][l] = R_{i jbar k lbar}", |i, j, k, l| b.chern_full.get(i, j, k, l)));
    o.insert("chern_ricci".into(), mat(&b.chern_ricci.coeff, "[i][j] = Ric_{i jbar}, form = i Ric_{i jbar} dz^i ^ dzbar^j"));
    o.insert("lc_ricci".into(), mat(&b.lc_ricci().coeff, "[i][j] = ric_{i jbar}, form = i ric_{i jbar} dz^i ^ dzbar^j"));
    o.insert(
        "lc_curvature".into(),
        quartic(n, "[i][j][k][l] = r^l_{i jbar k}", |i, j, k, l| b.lc.lc_11.get(i, j, k, l)),
    );
    o.insert("chern_scalar".into(), scalar(b.chern_scalar, b.chern_scalar_imag));
    o.insert("lc_scalar".into(), scalar(b.lc_scalar, b.lc_scalar_imag));
    o.insert("dbar_star_omega_lambda".into(), vec1(&dbar_star_omega_lambda(m).coeff, "[i]: coefficient of dz^i"));
    o.insert("dbar_star_omega".into(), vec1(&dbar_star_omega_gamma(&b.connection).coeff, "[i]: coefficient of dz^i"));
    o.insert("dbar_dbar_star_omega".into(), mat(&bb.coeff, "[i][j] = B_{i jbar}, form = i B_{i jbar} dz^i ^ dzbar^j"));
    o.insert("d_d_star_omega".into(), mat(&d_d_star(&bb).coeff, "[i][j] = B_{i jbar}, form = i B_{i jbar} dz^i ^ dzbar^j"));
    Ok(Value::Object(o))
}
