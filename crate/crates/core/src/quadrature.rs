//! Integration over the Hopf fundamental domain `{a < |z| ≤ b}`, `b = 2a`.
//!
//! Points are `z_k = ρ μ_k e^{iξ_k}` with `μ` on the positive orthant of `S^{n−1}`
//! in hyperspherical angles `θ_1..θ_{n−1} ∈ [0, π/2]`. Gauss–Legendre in `t = log ρ`
//! and in each `θ`, trapezoid in each phase `ξ`. The Euclidean volume element is
//! `ρ^{2n} dt · Π μ_k · Π_{k=1}^{n−2} sin^{n−1−k}θ_k dθ · dξ`.
//!
//! Top forms are integrated through their coefficient `c` against
//! `Π(√−1 dz^k∧dz̄^k) = 2^n dV`. With this basis `ω^n = n! det g`, and the norm
//! `‖α‖² = ∫ |α|² ω^n/n!`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::connection::lc_coefficients;
use crate::curvature::{chern_curvature, chern_ricci_from_tensor, chern_scalar};
use crate::dsl::FieldExpr;
use crate::fd;
use crate::forms::{Form11, PqForm};
use crate::hodge::dbar_star_omega_gamma;
use crate::jet::JetOptions;
use crate::metric::{evaluate_metric, MetricSpec};
use crate::point::ChartPoint;
use crate::{Error, Result, C64};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; m];
    let mut w = alloc::vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn gl_on(m: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(m);
    let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    (x.iter().map(|x| c + h * x).collect(), w.iter().map(|w| h * w).collect())
}

/// A product grid over the shell `{inner < |z| ≤ outer}` of `ℂⁿ`.
#[derive(Debug, Clone)]
pub struct IntegrationGrid {
    n: usize,
    resolution: usize,
    inner: f64,
    outer: f64,
    t: (Vec<f64>, Vec<f64>),
    theta: (Vec<f64>, Vec<f64>),
    phases: usize,
}

impl IntegrationGrid {
    /// The fundamental domain `{1/2 < |z| ≤ 1}` at resolution `r`: `r` radial nodes,
    /// `r` nodes per polar angle and `2r` per phase.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        Self::shell(n, r, 0.5, 1.0)
    }

    pub fn shell(n: usize, r: usize, inner: f64, outer: f64) -> Result<Self> {
        if n == 0 || r == 0 || !(inner > 0.0 && outer > inner) {
            return Err(Error::Unsupported(alloc::format!("grid n={n}, resolution={r}, shell ({inner}, {outer}]")));
        }
        Ok(Self {
            n,
            resolution: r,
            inner,
            outer,
            t: gl_on(r, inner.ln(), outer.ln()),
            theta: gl_on(r, 0.0, 0.5 * PI),
            phases: 2 * r,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.inner, self.outer)
    }

    fn counts(&self) -> (usize, usize, usize) {
        let r = self.t.0.len();
        let angles = r.pow(self.n as u32 - 1);
        let phases = self.phases.pow(self.n as u32);
        (r, angles, phases)
    }

    pub fn len(&self) -> usize {
        let (r, a, p) = self.counts();
        r * a * p
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of all weights, computed as a product of one-dimensional sums.
    pub fn total_weight(&self) -> f64 {
        let n = self.n as u32;
        let radial: f64 = self.t.0.iter().zip(&self.t.1).map(|(t, w)| w * (2.0 * n as f64 * t).exp()).sum();
        let mut angular = 1.0;
        // the angular weight factorizes as Π_k cos θ_k sin^{2n−1−2k} θ_k
        for k in 1..n {
            let pw = (2 * n - 1 - 2 * k) as i32;
            angular *= self.theta.0.iter().zip(&self.theta.1).map(|(th, w)| w * th.cos() * th.sin().powi(pw)).sum::<f64>();
        }
        radial * angular * (2.0 * PI).powi(n as i32)
    }

    /// Node `idx` and its weight; radial index outermost, then angles, then phases.
    pub fn node(&self, idx: usize) -> (ChartPoint, f64) {
        let n = self.n;
        let (r, angles, phases) = self.counts();
        debug_assert!(idx < r * angles * phases);
        let ir = idx / (angles * phases);
        let mut ia = (idx / phases) % angles;
        let mut ip = idx % phases;
        let rho = self.t.0[ir].exp();
        let mut weight = self.t.1[ir] * rho.powi(2 * n as i32);

        let mut mu = alloc::vec![0.0; n];
        let mut sin_prod = 1.0;
        let mut thetas = alloc::vec![0.0; n.saturating_sub(1)];
        for k in (0..n - 1).rev() {
            let j = ia % r;
            ia /= r;
            thetas[k] = self.theta.0[j];
            weight *= self.theta.1[j];
        }
        for k in 0..n - 1 {
            let th = thetas[k];
            mu[k] = sin_prod * th.cos();
            if k + 1 < n - 1 {
                weight *= th.sin().powi((n - 2 - k) as i32);
            }
            sin_prod *= th.sin();
        }
        mu[n - 1] = sin_prod;
        weight *= mu.iter().product::<f64>();

        let dxi = 2.0 * PI / self.phases as f64;
        let mut coords = alloc::vec![C64::new(0.0, 0.0); n];
        for k in (0..n).rev() {
            let xi = (ip % self.phases) as f64 * dxi;
            ip /= self.phases;
            coords[k] = C64::from_polar(rho * mu[k], xi);
        }
        weight *= dxi.powi(n as i32);
        (ChartPoint::new(coords).expect("finite grid node"), weight)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (ChartPoint, f64)> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }
}

/// `π^n/n! · (b^{2n} − a^{2n})`, the Euclidean volume of the shell.
pub fn shell_volume(n: usize, inner: f64, outer: f64) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    PI.powi(n as i32) / fact * (outer.powi(2 * n as i32) - inner.powi(2 * n as i32))
}

/// Quantities integrated as top forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Integrand {
    Zero,
    /// `c · dV` in the Euclidean volume; calibration only.
    Constant(f64),
    /// `s_C ω^n`.
    ScalarOmegaN,
    /// `Ric(ω) ∧ ω^{n−1}`, built in the wedge algebra.
    RicciWedgeOmega,
    /// `|∂̄*ω|² ω^n/n!`.
    DbarStarNormSq,
    /// `√−1∂∂̄f ∧ ω^{n−1}`.
    DdbarF(FieldExpr),
}

impl Integrand {
    pub fn name(&self) -> &'static str {
        match self {
            Integrand::Zero => "zero",
            Integrand::Constant(_) => "constant",
            Integrand::ScalarOmegaN => "s_C*omega^n",
            Integrand::RicciWedgeOmega => "Ric^omega^(n-1)",
            Integrand::DbarStarNormSq => "|dbar*omega|^2*vol",
            Integrand::DdbarF(_) => "i*ddbar(f)^omega^(n-1)",
        }
    }
}

/// Euclidean density of `integrand` at `p`: the top coefficient times `2^n`.
pub fn integrand_density(spec: &MetricSpec, integrand: &Integrand, p: &ChartPoint, opts: &JetOptions) -> Result<C64> {
    let n = spec.dim();
    let two_n = (1u64 << n) as f64;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let coef = match integrand {
        Integrand::Zero => return Ok(C64::new(0.0, 0.0)),
        Integrand::Constant(c) => return Ok(C64::new(*c, 0.0)),
        Integrand::ScalarOmegaN => {
            let m = evaluate_metric(spec, p, &JetOptions { second: true, ..*opts })?;
            let ric = chern_ricci_from_tensor(&chern_curvature(&m)?, m.g_inv.matrix());
            chern_scalar(&ric, m.g_inv.matrix()) * (fact * m.det)
        }
        Integrand::RicciWedgeOmega => {
            let m = evaluate_metric(spec, p, &JetOptions { second: true, ..*opts })?;
            let ric = chern_ricci_from_tensor(&chern_curvature(&m)?, m.g_inv.matrix());
            ric.to_pq().wedge(&PqForm::kahler_form(m.g.matrix()).power(n - 1)).top_coefficient()
        }
        Integrand::DbarStarNormSq => {
            let m = evaluate_metric(spec, p, &opts.first_order())?;
            let a = dbar_star_omega_gamma(&lc_coefficients(&m));
            a.norm_sqr(m.g_inv.matrix()) * m.det
        }
        Integrand::DdbarF(f) => {
            let g = spec.matrix_at(p)?;
            let h = fd::ddbar_scalar(|q| Ok(f.eval(q)?), p, opts.step_at(p), spec.domain())?;
            Form11::new(h).to_pq().wedge(&PqForm::kahler_form(&g).power(n - 1)).top_coefficient()
        }
    };
    Ok(coef * two_n)
}

/// A quadrature result; `imag` collects the imaginary residue of the densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub imag: f64,
    pub nodes: usize,
}

/// Weighted sum in node order.
pub fn weighted_sum(grid: &IntegrationGrid, densities: &[C64]) -> Integral {
    let mut s = C64::new(0.0, 0.0);
    for (i, d) in densities.iter().enumerate() {
        s += d * grid.node(i).1;
    }
    Integral { value: s.re, imag: s.im, nodes: densities.len() }
}

fn require_hopf(spec: &MetricSpec, grid: &IntegrationGrid) -> Result<()> {
    if !spec.is_hopf_family() {
        return Err(Error::Unsupported(alloc::format!("{spec} has no built-in fundamental domain")));
    }
    if spec.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: grid.dim() });
    }
    Ok(())
}

/// `∫ integrand` over the grid's shell; sequential, in node order.
pub fn integrate_top_form(spec: &MetricSpec, integrand: &Integrand, grid: &IntegrationGrid, opts: &JetOptions) -> Result<Integral> {
    require_hopf(spec, grid)?;
    let mut s = C64::new(0.0, 0.0);
    for (p, w) in grid.nodes() {
        s += integrand_density(spec, integrand, &p, opts)? * w;
    }
    Ok(Integral { value: s.re, imag: s.im, nodes: grid.len() })
}

/// One row of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineRow {
    pub resolution: usize,
    pub value: f64,
    /// `|I_R − I_{R/2}| / |I_R|`, absent on the first row.
    pub rel_change: Option<f64>,
}

/// Relative changes below this are treated as converged to rounding.
pub const CONVERGED_REL: f64 = 1e-12;

/// Integrates at `r`, `2r`, `4r` with `eval` supplying each integral.
pub fn grid_refine_study(
    n: usize,
    r: usize,
    mut eval: impl FnMut(&IntegrationGrid) -> Result<Integral>,
) -> Result<Vec<RefineRow>> {
    let mut rows: Vec<RefineRow> = Vec::with_capacity(3);
    for k in 0..3 {
        let grid = IntegrationGrid::new(n, r << k)?;
        let value = eval(&grid)?.value;
        let rel_change = rows.last().map(|prev| relative_gap(value, prev.value));
        rows.push(RefineRow { resolution: grid.resolution(), value, rel_change });
    }
    Ok(rows)
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// True when successive changes shrink by at least `factor` or are already at rounding level.
pub fn refinement_converges(rows: &[RefineRow], factor: f64) -> bool {
    let changes: Vec<f64> = rows.iter().filter_map(|r| r.rel_change).collect();
    changes.windows(2).all(|w| w[1] <= CONVERGED_REL || w[1] * factor <= w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::parse_spec;

    #[test]
    fn legendre_rule() {
        let (x, w) = gauss_legendre(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact for degree 9
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((i - 2.0 / 9.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn weights_give_shell_volume() {
        for n in 1..=3 {
            let g = IntegrationGrid::new(n, 6).unwrap();
            let sum: f64 = g.nodes().map(|(_, w)| w).sum();
            let exact = shell_volume(n, 0.5, 1.0);
            assert!((sum / exact - 1.0).abs() < 1e-6, "n={n} {sum} {exact}");
            assert!((g.total_weight() / sum - 1.0).abs() < 1e-12);
        }
        let g = IntegrationGrid::new(2, 64).unwrap();
        assert!((g.total_weight() / (15.0 * PI * PI / 32.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nodes_lie_in_the_shell() {
        let g = IntegrationGrid::new(3, 3).unwrap();
        for (p, w) in g.nodes() {
            assert!(p.norm() > 0.5 && p.norm() <= 1.0 && w > 0.0);
        }
    }

    #[test]
    fn moment_integrals() {
        let g = IntegrationGrid::new(2, 8).unwrap();
        let f1: f64 = g.nodes().map(|(p, w)| w * p.z(0).norm_sqr()).sum();
        let f2: f64 = g.nodes().map(|(p, w)| w * p.z(1).norm_sqr()).sum();
        let all: f64 = g.nodes().map(|(p, w)| w * p.norm_sqr()).sum();
        assert!((f1 - f2).abs() < 1e-12 && (f1 + f2 - all).abs() < 1e-12);
        // ∫_{shell} |z|² dV = π² (b⁶ − a⁶) / 3
        assert!((all / (PI * PI * (1.0 - 0.5f64.powi(6)) / 3.0) - 1.0).abs() < 1e-10);
        // odd in the phase
        let odd: f64 = g.nodes().map(|(p, w)| w * p.z(0).re).sum();
        assert!(odd.abs() < 1e-12);
    }

    #[test]
    fn total_scalar_identity_on_hopf() {
        let opts = JetOptions::analytic();
        for s in ["hopf0:n=2", "hopfp:n=2"] {
            let spec = parse_spec(s).unwrap();
            let g = IntegrationGrid::new(2, 3).unwrap();
            let a = integrate_top_form(&spec, &Integrand::ScalarOmegaN, &g, &opts).unwrap();
            let b = integrate_top_form(&spec, &Integrand::RicciWedgeOmega, &g, &opts).unwrap();
            assert!((a.value - 2.0 * b.value).abs() < 1e-9 * a.value.abs(), "{s}");
        }
        let z = integrate_top_form(&parse_spec("hopfp:n=2").unwrap(), &Integrand::Zero, &IntegrationGrid::new(2, 2).unwrap(), &opts)
            .unwrap();
        assert_eq!(z.value, 0.0);
        assert!(integrate_top_form(&parse_spec("flat:n=2").unwrap(), &Integrand::Zero, &IntegrationGrid::new(2, 2).unwrap(), &opts)
            .is_err());
    }
}
