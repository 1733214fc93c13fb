//! Chern and Levi-Civita curvature at a point.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::connection::{lc_coefficients, ConnectionCoeffs};
use crate::dsl::FieldExpr;
use crate::fd;
use crate::jet::JetOptions;
use crate::linalg::CMat;
use crate::metric::{evaluate_metric, log_det, MetricSpec, MetricValue};
use crate::point::{ChartPoint, Domain};
use crate::{Error, Result, C64};

pub use crate::forms::Form11;

/// A rank-4 complex array indexed `(a, b, c, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n * n * n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        data.push(f(a, b, c, d));
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `R_{i j̄ k l̄} = −∂_i∂_j̄ g_{k l̄} + g^{p q̄} ∂_i g_{k q̄} ∂_j̄ g_{p l̄}`, indexed `(i, j, k, l)`.
pub fn chern_curvature(m: &MetricValue) -> Result<Tensor4> {
    if !m.jet.has_second() {
        return Err(Error::MissingJet("Chern curvature needs mixed second derivatives"));
    }
    let n = m.dim();
    let gi = m.g_inv.matrix();
    let (dh, da, dm) = (&m.jet.d_hol, &m.jet.d_antihol, &m.jet.d_mixed);
    Ok(Tensor4::from_fn(n, |i, j, k, l| {
        let mut s = -dm[i][j][(k, l)];
        for p in 0..n {
            for q in 0..n {
                s += gi[(p, q)] * dh[i][(k, q)] * da[j][(p, l)];
            }
        }
        s
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicciRoute {
    /// `g^{k l̄} R_{i j̄ k l̄}`.
    Trace,
    /// `−∂_i∂_j̄ log det g` by finite differences.
    LogDet,
}

/// `R_{i j̄} = g^{k l̄} R_{i j̄ k l̄}`.
pub fn chern_ricci_from_tensor(r: &Tensor4, g_inv: &CMat) -> Form11 {
    let n = r.dim();
    Form11::new(CMat::from_fn(n, |i, j| {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                s += g_inv[(k, l)] * r.get(i, j, k, l);
            }
        }
        s
    }))
}

/// `−∂_i∂_j̄ log det g` at `p`.
pub fn chern_ricci_logdet(spec: &MetricSpec, p: &ChartPoint, step: f64) -> Result<Form11> {
    let h = fd::ddbar_scalar(|q| log_det(spec, q), p, step, spec.domain())?;
    Ok(Form11::new(h.scale_re(-1.0)))
}

/// The Chern–Ricci form by either route.
pub fn chern_ricci(spec: &MetricSpec, m: &MetricValue, route: RicciRoute) -> Result<Form11> {
    match route {
        RicciRoute::Trace => Ok(chern_ricci_from_tensor(&chern_curvature(m)?, m.g_inv.matrix())),
        RicciRoute::LogDet => chern_ricci_logdet(spec, &m.point, m.jet.step),
    }
}

/// `s = g^{i j̄} R_{i j̄}`; the imaginary part is returned as a residue.
pub fn chern_scalar(ricci: &Form11, g_inv: &CMat) -> C64 {
    ricci.trace(g_inv)
}

/// Wirtinger derivatives of both coefficient families, each layout as [`ConnectionCoeffs::to_flat`].
#[derive(Debug, Clone)]
pub struct ConnectionGradient {
    pub hol: Vec<Vec<C64>>,
    pub antihol: Vec<Vec<C64>>,
}

/// Differentiates the coefficient fields: each stencil node re-evaluates a first-order jet
/// and contracts it exactly. Steps `h` and `2h` are Richardson-combined. `opts` should already
/// be pinned to the centre point.
pub fn connection_gradient(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions) -> Result<ConnectionGradient> {
    let inner = opts.first_order();
    let field = |q: &ChartPoint| -> Result<Vec<C64>> {
        let m = evaluate_metric(spec, q, &inner)?;
        Ok(lc_coefficients(&m).to_flat())
    };
    let g = fd::gradient_richardson(field, p, opts.step_at(p), spec.domain())?;
    Ok(ConnectionGradient { hol: g.hol, antihol: g.antihol })
}

/// Levi-Civita curvature outputs.
#[derive(Debug, Clone)]
pub struct LcCurvature {
    /// `𝔯^l_{i j̄ k}` at `(i, j, k, l)`.
    pub lc_11: Tensor4,
    /// `𝔯_{i j̄ k l̄} = 𝔯^s_{i j̄ k} g_{s l̄}`.
    pub lc_lowered: Tensor4,
    /// `𝔯^{(1)}_{i j̄} = 𝔯^k_{i j̄ k}`.
    pub lc_ricci: Form11,
    /// `g^{i j̄} g^{k l̄} 𝔯_{i j̄ k l̄}`.
    pub lc_scalar: C64,
}

/// `𝔯^l_{i j̄ k} = −(∂_j̄ Γ^l_{ik} − ∂_i Γ^l_{j̄ k} + Γ^s_{ik} Γ^l_{j̄ s} − Γ^s_{j̄ k} Γ^l_{s i})`.
pub fn lc_curvature(m: &MetricValue, c: &ConnectionCoeffs, dc: &ConnectionGradient) -> LcCurvature {
    let n = m.dim();
    let off = n * n * n;
    let at = |l: usize, i: usize, k: usize| (l * n + i) * n + k;
    let lc_11 = Tensor4::from_fn(n, |i, j, k, l| {
        let d_hol_bar = dc.antihol[j][at(l, i, k)];
        let d_mixed = dc.hol[i][off + at(l, j, k)];
        let mut quad = C64::new(0.0, 0.0);
        for s in 0..n {
            quad += c.hol(s, i, k) * c.mixed(l, j, s) - c.mixed(s, j, k) * c.hol(l, s, i);
        }
        -(d_hol_bar - d_mixed + quad)
    });
    let g = m.g.matrix();
    let gi = m.g_inv.matrix();
    let lc_lowered = Tensor4::from_fn(n, |i, j, k, l| (0..n).map(|s| lc_11.get(i, j, k, s) * g[(s, l)]).sum());
    let lc_ricci = Form11::new(CMat::from_fn(n, |i, j| (0..n).map(|k| lc_11.get(i, j, k, k)).sum()));
    let mut lc_scalar = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    lc_scalar += gi[(i, j)] * gi[(k, l)] * lc_lowered.get(i, j, k, l);
                }
            }
        }
    }
    LcCurvature { lc_11, lc_lowered, lc_ricci, lc_scalar }
}

/// Everything curvature-related at one point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub metric: MetricValue,
    pub connection: ConnectionCoeffs,
    pub chern_full: Tensor4,
    pub chern_ricci: Form11,
    /// Real part of the Chern scalar; the imaginary residue is in `chern_scalar_imag`.
    pub chern_scalar: f64,
    pub chern_scalar_imag: f64,
    pub lc: LcCurvature,
    pub lc_scalar: f64,
    pub lc_scalar_imag: f64,
}

impl CurvatureBundle {
    pub fn lc_ricci(&self) -> &Form11 {
        &self.lc.lc_ricci
    }
}

/// Metric, connection, Chern and Levi-Civita curvature of `spec` at `p`.
pub fn curvature_at(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions) -> Result<CurvatureBundle> {
    let opts = JetOptions { second: true, ..opts.pinned(p) };
    let metric = evaluate_metric(spec, p, &opts)?;
    let connection = lc_coefficients(&metric);
    let chern_full = chern_curvature(&metric)?;
    let chern_ricci = chern_ricci_from_tensor(&chern_full, metric.g_inv.matrix());
    let s = chern_scalar(&chern_ricci, metric.g_inv.matrix());
    let dc = connection_gradient(spec, p, &opts)?;
    let lc = lc_curvature(&metric, &connection, &dc);
    let ls = lc.lc_scalar;
    Ok(CurvatureBundle {
        metric,
        connection,
        chern_full,
        chern_ricci,
        chern_scalar: s.re,
        chern_scalar_imag: s.im,
        lc,
        lc_scalar: ls.re,
        lc_scalar_imag: ls.im,
    })
}

/// Curvature `∂_i∂_j̄ log h` of a line-bundle weight `h`, the sign that reads
/// `−(√−1/2) dw∧dw̄/(Im w)²` for `h = (Im w)²`. Differences are Richardson-extrapolated
/// over `step` and `2·step`; `1e-3` is a good step.
pub fn line_bundle_ricci(weight: &FieldExpr, p: &ChartPoint, step: f64, domain: Domain) -> Result<Form11> {
    domain.check(p)?;
    let log_h = |q: &ChartPoint| -> Result<f64> {
        let h = weight.eval(q)?;
        if h > 0.0 {
            Ok(h.ln())
        } else {
            Err(Error::NonPositiveWeight(h))
        }
    };
    log_h(p)?;
    Ok(Form11::new(fd::ddbar_scalar_richardson(log_h, p, step, domain)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::parse_spec;

    fn bundle(spec: &str, xy: &[f64], opts: JetOptions) -> CurvatureBundle {
        curvature_at(&parse_spec(spec).unwrap(), &ChartPoint::from_real(xy).unwrap(), &opts).unwrap()
    }

    #[test]
    fn flat_is_flat() {
        let b = bundle("flat:n=2", &[0.3, 0.1, -0.5, 0.2], JetOptions::analytic());
        assert_eq!(b.chern_full.max_abs(), 0.0);
        assert_eq!(b.lc.lc_11.max_abs(), 0.0);
        assert_eq!(b.chern_scalar, 0.0);
    }

    #[test]
    fn hopf_perturbed_at_unit_point() {
        let b = bundle("hopfp:n=2", &[1.0, 0.0, 0.0, 0.0], JetOptions::analytic());
        let want = CMat::from_real_diag(&[0.0, 2.0]);
        assert!(b.chern_ricci.coeff.max_abs_diff(&want) < 1e-12);
        assert!((b.chern_scalar - 4.0).abs() < 1e-12);
        assert!(b.lc_ricci().max_abs() < 1e-7, "{}", b.lc_ricci().max_abs());
        assert!(b.lc_scalar.abs() < 1e-7);
    }

    #[test]
    fn fubini_study_is_einstein_at_origin() {
        let b = bundle("fs:n=1", &[0.0, 0.0], JetOptions::analytic());
        assert!((b.chern_ricci.coeff[(0, 0)] - 2.0).norm() < 1e-12);
        assert!((b.chern_scalar - 2.0).abs() < 1e-12);
        assert!(b.lc_ricci().max_abs_diff(&b.chern_ricci) < 1e-7);
    }

    #[test]
    fn logdet_route_matches_trace() {
        let spec = parse_spec("hopfp:n=3").unwrap();
        let p = ChartPoint::from_real(&[0.4, -0.2, 0.3, 0.5, -0.6, 0.1]).unwrap();
        let m = evaluate_metric(&spec, &p, &JetOptions::analytic()).unwrap();
        let a = chern_ricci(&spec, &m, RicciRoute::Trace).unwrap();
        let b = chern_ricci(&spec, &m, RicciRoute::LogDet).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-6);
    }

    #[test]
    fn inoue_weight() {
        let w: FieldExpr = "y1^2".parse().unwrap();
        for (im, want) in [(1.0, -0.5), (2.0, -0.125)] {
            let p = ChartPoint::from_real(&[0.3, im, 0.1, -0.2]).unwrap();
            let r = line_bundle_ricci(&w, &p, 1e-3, Domain::HalfPlaneTimesPlane).unwrap();
            assert!((r.coeff[(0, 0)] - want).norm() < 1e-8, "{} {want}", r.coeff[(0, 0)]);
            assert!(r.coeff[(1, 1)].norm() < 1e-8 && r.coeff[(0, 1)].norm() < 1e-8);
        }
        let one: FieldExpr = "1".parse().unwrap();
        let p = ChartPoint::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(line_bundle_ricci(&one, &p, 1e-4, Domain::HalfPlaneTimesPlane).unwrap().max_abs(), 0.0);
        let neg: FieldExpr = "-1".parse().unwrap();
        assert!(matches!(
            line_bundle_ricci(&neg, &p, 1e-4, Domain::HalfPlaneTimesPlane),
            Err(Error::NonPositiveWeight(_))
        ));
    }
}
