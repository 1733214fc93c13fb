//! Torsion, `∂̄*ω` by two routes, the second-order term of the Ricci relation,
//! and the Gauduchon / balanced residuals.
//!
//! Conventions: `∂̄*ω = a_i dz^i`, and a Form11 coefficient `B` stands for
//! `√−1 B_{i j̄} dz^i∧dz̄^j`, so `∂̄(a_i dz^i)` has `B_{i j̄} = √−1 ∂_j̄ a_i`.

use alloc::vec::Vec;

use crate::connection::{lc_coefficients, ConnectionCoeffs};
use crate::fd;
use crate::forms::{Form01, Form10, Form11, Form21, PqForm};
use crate::jet::JetOptions;
use crate::linalg::CMat;
use crate::metric::{evaluate_metric, MetricSpec, MetricValue};
use crate::point::ChartPoint;
use crate::{Error, Result, C64, I};

/// Scale of the Λ-route contraction relative to the torsion form below. Fixed by
/// requiring agreement with the Γ route on the flat and conformally flat families.
pub const LAMBDA_NORMALIZATION: f64 = 1.0;

/// `∂ω` with `T_{k i, j̄} = ∂_k g_{i j̄} − ∂_i g_{k j̄}`.
pub fn torsion_form(m: &MetricValue) -> Form21 {
    let dh = &m.jet.d_hol;
    Form21::from_upper(m.dim(), |k, i, j| dh[k][(i, j)] - dh[i][(k, j)])
}

/// `∂̄*ω = √−1 Λ∂ω`, coefficient `a_i = −√−1 g^{k q̄} T_{k i, q̄}`.
pub fn dbar_star_omega_lambda(m: &MetricValue) -> Form10 {
    let n = m.dim();
    let t = torsion_form(m);
    let gi = m.g_inv.matrix();
    let coeff = (0..n)
        .map(|i| {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                for q in 0..n {
                    s += gi[(k, q)] * t.get(k, i, q);
                }
            }
            -I * s * LAMBDA_NORMALIZATION
        })
        .collect();
    Form10 { coeff }
}

/// `∂̄*ω = 2√−1 conj(Γ^k_{ī k}) dz^i`.
pub fn dbar_star_omega_gamma(c: &ConnectionCoeffs) -> Form10 {
    Form10 { coeff: c.mixed_trace().into_iter().map(|t| I * t.conj() * 2.0).collect() }
}

/// `∂*ω = −2√−1 Γ^k_{ī k} dz̄^i`.
pub fn d_star_omega_gamma(c: &ConnectionCoeffs) -> Form01 {
    Form01 { coeff: c.mixed_trace().into_iter().map(|t| -I * t * 2.0).collect() }
}

/// `∂̄∂̄*ω`, differencing the Γ-route field with Richardson over `h` and `2h`; each stencil
/// node uses a first-order jet.
pub fn dbar_dbar_star(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions) -> Result<Form11> {
    let opts = opts.pinned(p);
    let inner = opts.first_order();
    let field = |q: &ChartPoint| -> Result<Vec<C64>> {
        let m = evaluate_metric(spec, q, &inner)?;
        Ok(dbar_star_omega_gamma(&lc_coefficients(&m)).coeff)
    };
    let g = fd::gradient_richardson(field, p, opts.step_at(p), spec.domain())?;
    Ok(Form11::new(CMat::from_fn(p.dim(), |i, j| I * g.antihol[j][i])))
}

/// `∂∂*ω` from `∂̄∂̄*ω`: the conjugate-transpose coefficient.
pub fn d_d_star(dbar_dbar_star: &Form11) -> Form11 {
    dbar_dbar_star.conj_transpose()
}

/// `½(∂∂*ω + ∂̄∂̄*ω)`.
pub fn second_order_form(dbar_dbar_star: &Form11) -> Form11 {
    dbar_dbar_star.lin_comb(0.5, &d_d_star(dbar_dbar_star), 0.5)
}

/// `𝔯ic(ω) = Ric(ω) − ½(∂∂*ω + ∂̄∂̄*ω)`.
pub fn lc_ricci_via_identity(chern_ricci: &Form11, second_order: &Form11) -> Form11 {
    chern_ricci.lin_comb(1.0, second_order, -1.0)
}

/// `⟨a, b⟩` for real (1,1)-forms at the metric's point.
pub fn pointwise_inner_11(a: &Form11, b: &Form11, m: &MetricValue) -> C64 {
    a.inner(b, m.g_inv.matrix())
}

/// The Hodge-side quantities at one point.
#[derive(Debug, Clone)]
pub struct HodgeBundle {
    pub torsion: Form21,
    pub dbar_star_lambda: Form10,
    pub dbar_star_gamma: Form10,
    pub dbar_dbar_star: Form11,
    pub d_d_star: Form11,
    pub second_order: Form11,
}

pub fn hodge_at(spec: &MetricSpec, m: &MetricValue, c: &ConnectionCoeffs, opts: &JetOptions) -> Result<HodgeBundle> {
    let b = dbar_dbar_star(spec, &m.point, opts)?;
    Ok(HodgeBundle {
        torsion: torsion_form(m),
        dbar_star_lambda: dbar_star_omega_lambda(m),
        dbar_star_gamma: dbar_star_omega_gamma(c),
        d_d_star: d_d_star(&b),
        second_order: second_order_form(&b),
        dbar_dbar_star: b,
    })
}

fn require_surface_or_higher(spec: &MetricSpec) -> Result<usize> {
    let n = spec.dim();
    if n < 2 {
        return Err(Error::Unsupported(alloc::format!("ω^(n−1) residuals need n ≥ 2, got n={n}")));
    }
    Ok(n)
}

fn omega_power_field(spec: &MetricSpec, m: usize) -> impl Fn(&ChartPoint) -> Result<PqForm> + '_ {
    move |q| Ok(PqForm::kahler_form(&spec.matrix_at(q)?).power(m))
}

/// How a residual is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualRoute {
    /// Finite differences of the `ω^{n−1}` coefficient fields.
    Stencil,
    /// Leibniz expansion over the metric jet.
    Jet,
}

/// `∂∂̄ω^{n−1}` as one coefficient against `Π(√−1 dz^k∧dz̄^k)`; zero iff Gauduchon at `p`.
pub fn gauduchon_residual(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions, route: ResidualRoute) -> Result<Vec<C64>> {
    let n = require_surface_or_higher(spec)?;
    let pw = n - 1;
    let form = match route {
        ResidualRoute::Stencil => {
            let h = fd::hessian(omega_power_field(spec, pw), p, opts.step_at(p), spec.domain())?;
            PqForm::ddbar(&h.mixed)
        }
        ResidualRoute::Jet => {
            let m = evaluate_metric(spec, p, &JetOptions { second: true, ..*opts })?;
            let j = &m.jet;
            let w = PqForm::kahler_form(m.g.matrix());
            let dw = PqForm::d_hol(&j.d_hol.iter().map(PqForm::kahler_form).collect::<Vec<_>>());
            let dbw = PqForm::d_antihol(&j.d_antihol.iter().map(PqForm::kahler_form).collect::<Vec<_>>());
            let ddbw = PqForm::ddbar(
                &j.d_mixed.iter().map(|row| row.iter().map(PqForm::kahler_form).collect()).collect::<Vec<Vec<_>>>(),
            );
            // ∂∂̄ω^m = m ω^{m−1}∧∂∂̄ω + m(m−1) ω^{m−2}∧∂ω∧∂̄ω
            let mf = C64::new(pw as f64, 0.0);
            let mut out = w.power(pw - 1).wedge(&ddbw).scale(mf);
            if pw >= 2 {
                let t = w.power(pw - 2).wedge(&dw).wedge(&dbw);
                out = out.add(&t.scale(mf * (pw as f64 - 1.0)));
            }
            out
        }
    };
    Ok(alloc::vec![form.top_coefficient()])
}

/// `dω^{n−1}`: the `n` coefficients of the `(n, n−1)` part followed by the `n` of the
/// `(n−1, n)` part, each on `dz^{1..n}∧dz̄^{J}` / `dz^{I}∧dz̄^{1..n}` with the omitted index ascending.
pub fn balanced_residual(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions, route: ResidualRoute) -> Result<Vec<C64>> {
    let n = require_surface_or_higher(spec)?;
    let pw = n - 1;
    let form = match route {
        ResidualRoute::Stencil => {
            let g = fd::gradient(omega_power_field(spec, pw), p, opts.step_at(p), spec.domain())?;
            PqForm::d_hol(&g.hol).add(&PqForm::d_antihol(&g.antihol))
        }
        ResidualRoute::Jet => {
            let m = evaluate_metric(spec, p, &opts.first_order())?;
            let w = PqForm::kahler_form(m.g.matrix());
            let dw = PqForm::d_hol(&m.jet.d_hol.iter().map(PqForm::kahler_form).collect::<Vec<_>>());
            let dbw = PqForm::d_antihol(&m.jet.d_antihol.iter().map(PqForm::kahler_form).collect::<Vec<_>>());
            // dω^m = m ω^{m−1}∧dω
            w.power(pw - 1).wedge(&dw.add(&dbw)).scale(C64::new(pw as f64, 0.0))
        }
    };
    let full = (1u32 << n) - 1;
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        out.push(form.coefficient(full, full & !(1 << k)));
    }
    for k in 0..n {
        out.push(form.coefficient(full & !(1 << k), full));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_at;
    use crate::metric::parse_spec;

    fn at(spec: &str, xy: &[f64]) -> (MetricSpec, ChartPoint, MetricValue, ConnectionCoeffs) {
        let spec = parse_spec(spec).unwrap();
        let p = ChartPoint::from_real(xy).unwrap();
        let m = evaluate_metric(&spec, &p, &JetOptions::analytic()).unwrap();
        let c = lc_coefficients(&m);
        (spec, p, m, c)
    }

    #[test]
    fn lambda_normalization_pinned_on_flat_families() {
        for spec in ["flat:n=2", "conformal-flat:n=2", "conformal-flat:n=3", "conformal(flat:n=2; f=0.4*y2 - 0.3*x1^2)"] {
            let xy = if spec.contains("n=3") { &[0.2, -0.4, 0.7, 0.1, 0.3, 0.5][..] } else { &[0.2, -0.4, 0.7, 0.1][..] };
            let (_, _, m, c) = at(spec, xy);
            let a = dbar_star_omega_lambda(&m);
            let b = dbar_star_omega_gamma(&c);
            assert!(a.max_abs_diff(&b) < 1e-9, "{spec}");
        }
        let (_, _, m, _) = at("conformal-flat:n=2", &[0.2, -0.4, 0.7, 0.1]);
        let a = dbar_star_omega_lambda(&m);
        assert!((a.coeff[0] - I * 0.5).norm() < 1e-8 && a.coeff[1].norm() < 1e-8);
    }

    #[test]
    fn hopf_perturbed_closed_forms() {
        let (spec, p, m, c) = at("hopfp:n=2", &[1.0, 0.0, 0.0, 0.0]);
        let want = Form10 { coeff: alloc::vec![-I * 2.0, C64::new(0.0, 0.0)] };
        assert!(dbar_star_omega_lambda(&m).max_abs_diff(&want) < 1e-12);
        assert!(dbar_star_omega_gamma(&c).max_abs_diff(&want) < 1e-12);
        let b = dbar_dbar_star(&spec, &p, &JetOptions::analytic()).unwrap();
        assert!(b.coeff.max_abs_diff(&CMat::from_real_diag(&[0.0, 2.0])) < 1e-7);
        let so = second_order_form(&b);
        assert!((pointwise_inner_11(&so, &Form11::new(m.g.matrix().clone()), &m) - 4.0).norm() < 1e-7);
        let k = curvature_at(&spec, &p, &JetOptions::analytic()).unwrap();
        assert!(lc_ricci_via_identity(&k.chern_ricci, &so).max_abs() < 1e-7);
    }

    #[test]
    fn hopf_standard_torsion_at_unit_point() {
        let (_, _, m, c) = at("hopf0:n=2", &[1.0, 0.0, 0.0, 0.0]);
        let t = torsion_form(&m);
        assert!((t.get(0, 1, 1) + 1.0).norm() < 1e-15);
        assert!((t.get(1, 0, 1) - 1.0).norm() < 1e-15);
        assert_eq!(t.get(0, 1, 0), C64::new(0.0, 0.0));
        let a = dbar_star_omega_lambda(&m);
        assert!((a.coeff[0] + I).norm() < 1e-15 && a.coeff[1].norm() < 1e-15);
        assert!(a.max_abs_diff(&dbar_star_omega_gamma(&c)) < 1e-15);
        assert!(d_star_omega_gamma(&c).conj().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn kahler_torsion_vanishes() {
        let (spec, p, m, _) = at("fs:n=3", &[0.2, -0.4, 0.7, 0.1, 0.3, 0.5]);
        assert!(torsion_form(&m).max_abs() < 1e-14);
        for route in [ResidualRoute::Stencil, ResidualRoute::Jet] {
            let b = balanced_residual(&spec, &p, &JetOptions::analytic(), route).unwrap();
            assert!(b.iter().all(|c| c.norm() < 1e-8), "{route:?} {b:?}");
        }
    }

    #[test]
    fn gauduchon_routes() {
        for spec in ["hopf0:n=2", "hopfp:n=2", "hopfp:n=3", "conformal(hopf0:n=3; f=0.3*x1)"] {
            let xy = if spec.contains("n=3") { &[0.6, -0.4, 0.7, 0.1, 0.3, 0.5][..] } else { &[0.6, -0.4, 0.7, 0.1][..] };
            let (spec_v, p, _, _) = at(spec, xy);
            let opts = JetOptions::analytic();
            let s = gauduchon_residual(&spec_v, &p, &opts, ResidualRoute::Stencil).unwrap();
            let j = gauduchon_residual(&spec_v, &p, &opts, ResidualRoute::Jet).unwrap();
            assert!((s[0] - j[0]).norm() < 1e-5, "{spec} {s:?} {j:?}");
            let bs = balanced_residual(&spec_v, &p, &opts, ResidualRoute::Stencil).unwrap();
            let bj = balanced_residual(&spec_v, &p, &opts, ResidualRoute::Jet).unwrap();
            let d = bs.iter().zip(&bj).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(d < 1e-6, "{spec} {bs:?} {bj:?}");
            if !spec.starts_with("conformal") {
                assert!(j[0].norm() < 1e-10, "{spec} {j:?}");
                assert!(bj.iter().any(|c| c.norm() > 0.1), "{spec} {bj:?}");
            }
        }
    }
}
