//! Hermitian metric fields on charts.
//!
//! The zoo: the flat metric, the standard Hopf metric `ω₀ = √−1 δ_{ij}/|z|² dz^i∧dz̄^j`,
//! its Levi-Civita Ricci-flat perturbation `ω₀ − (1/n)√−1∂∂̄log|z|²`, Fubini–Study in an
//! affine chart, user-supplied entries, conformal rescalings `e^f ω` of any of these, and
//! the canonical-bundle weight `(Im w)²` of the Inoue model on `H × ℂ`.

mod syntax;
mod zoo;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::dsl::{Expr, FieldExpr};
use crate::jet::{self, DerivMode, DerivativeJet, JetOptions, JetSource};
use crate::linalg::{invert_hermitian, CMat, HermitianMatrix};
use crate::point::{ChartPoint, Domain};
use crate::{Error, Result, C64};

pub use syntax::{parse_spec, ZOO};
pub use zoo::{hopf_perturbed_det_constant, hopf_perturbed_inverse};

/// An entry of a custom metric: `g_{i j̄} = re + √−1·im` on or above the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomEntry {
    pub i: usize,
    pub j: usize,
    pub re: FieldExpr,
    pub im: Option<FieldExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricKind {
    Flat,
    HopfStandard,
    HopfPerturbed,
    FubiniStudy,
    /// The line-bundle weight `h = (Im w)²` on `K` over `H × ℂ`.
    InoueCanonical,
    Custom(Vec<CustomEntry>),
    Conformal { base: Box<MetricSpec>, factor: FieldExpr },
}

/// A named, parameterized Hermitian metric field.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    kind: MetricKind,
    n: usize,
}

impl MetricSpec {
    pub fn flat(n: usize) -> Result<Self> {
        Self::checked(MetricKind::Flat, n, 1)
    }

    pub fn hopf_standard(n: usize) -> Result<Self> {
        Self::checked(MetricKind::HopfStandard, n, 1)
    }

    pub fn hopf_perturbed(n: usize) -> Result<Self> {
        Self::checked(MetricKind::HopfPerturbed, n, 2)
    }

    pub fn fubini_study(n: usize) -> Result<Self> {
        Self::checked(MetricKind::FubiniStudy, n, 1)
    }

    pub fn inoue_canonical() -> Self {
        Self { kind: MetricKind::InoueCanonical, n: 2 }
    }

    /// `e^{x₁}·δ`, the conformally flat example.
    pub fn conformal_flat(n: usize, factor: FieldExpr) -> Result<Self> {
        Ok(conformal_rescale(&Self::flat(n)?, factor))
    }

    /// Entries on or above the diagonal; the lower triangle follows by conjugation and
    /// only the real part of a diagonal entry is used. Missing off-diagonal entries are zero.
    pub fn custom(n: usize, entries: Vec<CustomEntry>) -> Result<Self> {
        for e in &entries {
            if e.i > e.j || e.j >= n {
                return Err(Error::InvalidSpec(format!("custom entry g{}{} outside the upper triangle", e.i + 1, e.j + 1)));
            }
        }
        for k in 0..n {
            if !entries.iter().any(|e| e.i == k && e.j == k) {
                return Err(Error::InvalidSpec(format!("custom metric is missing diagonal entry g{0}{0}", k + 1)));
            }
        }
        Self::checked(MetricKind::Custom(entries), n, 1)
    }

    fn checked(kind: MetricKind, n: usize, min: usize) -> Result<Self> {
        if n < min || n > 9 {
            return Err(Error::InvalidSpec(format!("dimension n={n} outside {min}..=9")));
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        match &self.kind {
            MetricKind::HopfStandard | MetricKind::HopfPerturbed => Domain::Punctured,
            MetricKind::InoueCanonical => Domain::HalfPlaneTimesPlane,
            MetricKind::Conformal { base, .. } => base.domain(),
            _ => Domain::FullSpace,
        }
    }

    /// The innermost non-conformal metric.
    pub fn root(&self) -> &MetricSpec {
        match &self.kind {
            MetricKind::Conformal { base, .. } => base.root(),
            _ => self,
        }
    }

    /// True for the metrics known to be Kähler (flat and Fubini–Study).
    pub fn is_kahler(&self) -> bool {
        matches!(self.kind, MetricKind::Flat | MetricKind::FubiniStudy)
    }

    /// Hopf metrics and their conformal rescalings, which descend to the Hopf manifold
    /// when the conformal factor is invariant under `z → z/2`.
    pub fn is_hopf_family(&self) -> bool {
        matches!(self.root().kind, MetricKind::HopfStandard | MetricKind::HopfPerturbed)
    }

    pub fn is_line_bundle_weight(&self) -> bool {
        matches!(self.kind, MetricKind::InoueCanonical)
    }

    /// The weight `h` for line-bundle specs.
    pub fn line_bundle_weight(&self) -> Option<FieldExpr> {
        match self.kind {
            MetricKind::InoueCanonical => Some(FieldExpr::new(Expr::Pow(alloc::boxed::Box::new(Expr::Im(0)), 2))),
            _ => None,
        }
    }

    pub fn has_analytic_jet(&self) -> bool {
        match &self.kind {
            MetricKind::Flat | MetricKind::HopfStandard | MetricKind::HopfPerturbed | MetricKind::FubiniStudy => true,
            MetricKind::Conformal { base, .. } => base.has_analytic_jet(),
            MetricKind::Custom(_) | MetricKind::InoueCanonical => false,
        }
    }

    fn check_point(&self, p: &ChartPoint) -> Result<()> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.dim() });
        }
        self.domain().check(p)
    }

    /// `g_{i j̄}(p)` with no derivatives and no positivity check.
    pub fn matrix_at(&self, p: &ChartPoint) -> Result<CMat> {
        self.check_point(p)?;
        let n = self.n;
        Ok(match &self.kind {
            MetricKind::Flat => CMat::identity(n),
            MetricKind::HopfStandard => zoo::hopf_standard(p, false).g,
            MetricKind::HopfPerturbed => zoo::hopf_perturbed(p, false).g,
            MetricKind::FubiniStudy => zoo::fubini_study(p, false).g,
            MetricKind::InoueCanonical => return Err(Error::NotATangentMetric(String::from("inoue-k"))),
            MetricKind::Custom(entries) => {
                let mut g = CMat::zeros(n);
                for e in entries {
                    let re = e.re.eval(p)?;
                    if e.i == e.j {
                        g[(e.i, e.i)] = C64::new(re, 0.0);
                    } else {
                        let im = match &e.im {
                            Some(im) => im.eval(p)?,
                            None => 0.0,
                        };
                        g[(e.i, e.j)] = C64::new(re, im);
                        g[(e.j, e.i)] = C64::new(re, -im);
                    }
                }
                g
            }
            MetricKind::Conformal { base, factor } => base.matrix_at(p)?.scale_re(factor.eval(p)?.exp()),
        })
    }

    /// The metric jet at `p`.
    pub fn jet_at(&self, p: &ChartPoint, opts: &JetOptions) -> Result<DerivativeJet> {
        self.check_point(p)?;
        let step = opts.step_at(p);
        let mut jet = match opts.mode {
            DerivMode::Analytic => self.analytic_jet(p, step, opts.second)?,
            DerivMode::FiniteDifference => {
                let value = HermitianMatrix::new(self.matrix_at(p)?)?;
                jet::fd_jet(|q| self.matrix_at(q), p, value, step, self.domain(), opts.second, false)?
            }
        };
        if opts.holhol {
            let h = crate::fd::hessian(|q| self.matrix_at(q), p, step, self.domain())?;
            jet.d_holhol = Some(h.holhol);
        }
        Ok(jet)
    }

    fn analytic_jet(&self, p: &ChartPoint, step: f64, second: bool) -> Result<DerivativeJet> {
        let z = match &self.kind {
            MetricKind::Flat => {
                return Ok(DerivativeJet::constant(HermitianMatrix::identity(self.n), JetSource::Analytic, step, second))
            }
            MetricKind::HopfStandard => zoo::hopf_standard(p, second),
            MetricKind::HopfPerturbed => zoo::hopf_perturbed(p, second),
            MetricKind::FubiniStudy => zoo::fubini_study(p, second),
            MetricKind::Conformal { base, factor } => return conformal_jet(base, factor, p, step, second),
            MetricKind::Custom(_) => return Err(Error::AnalyticUnavailable(String::from("custom metrics"))),
            MetricKind::InoueCanonical => return Err(Error::NotATangentMetric(String::from("inoue-k"))),
        };
        Ok(DerivativeJet {
            value: HermitianMatrix::new(z.g)?,
            d_hol: z.d_hol,
            d_antihol: z.d_antihol,
            d_mixed: z.d_mixed,
            d_holhol: None,
            source: JetSource::Analytic,
            step,
        })
    }
}

/// Jet of `e^f g` from the base jet and a finite-difference jet of `f` (product rule).
fn conformal_jet(base: &MetricSpec, factor: &FieldExpr, p: &ChartPoint, step: f64, second: bool) -> Result<DerivativeJet> {
    let b = base.analytic_jet(p, step, second)?;
    let f = jet::scalar_jet(|q| Ok(factor.eval(q)?), p, step, base.domain(), second)?;
    let n = p.dim();
    let ef = f.value.exp();
    let e = C64::new(ef, 0.0);
    let one = C64::new(1.0, 0.0);
    let g = b.value.matrix();
    let d_hol: Vec<CMat> = (0..n).map(|k| g.lin_comb(f.d_hol[k] * e, &b.d_hol[k], e)).collect();
    let d_antihol: Vec<CMat> = (0..n).map(|l| g.lin_comb(f.d_antihol[l] * e, &b.d_antihol[l], e)).collect();
    let d_mixed = if second {
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        let s = f.d_hol[k] * f.d_antihol[l] + f.d_mixed[(k, l)];
                        let t = g.lin_comb(s, &b.d_antihol[l], f.d_hol[k]);
                        let t = t.lin_comb(one, &b.d_hol[k], f.d_antihol[l]);
                        t.lin_comb(e, &b.d_mixed[k][l], e)
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(DerivativeJet {
        value: HermitianMatrix::new(g.scale_re(ef))?,
        d_hol,
        d_antihol,
        d_mixed,
        d_holhol: None,
        source: JetSource::Analytic,
        step,
    })
}

/// A spec whose value is `e^{f(p)}` times the base value.
pub fn conformal_rescale(spec: &MetricSpec, f: FieldExpr) -> MetricSpec {
    MetricSpec { n: spec.n, kind: MetricKind::Conformal { base: Box::new(spec.clone()), factor: f } }
}

/// A metric evaluated at a point: `g`, `g^{-1}`, `det g` and the jet.
#[derive(Debug, Clone)]
pub struct MetricValue {
    pub point: ChartPoint,
    pub g: HermitianMatrix,
    pub g_inv: HermitianMatrix,
    pub det: f64,
    pub jet: DerivativeJet,
}

impl MetricValue {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }
}

/// Evaluates `spec` at `p` with derivatives as requested by `opts`.
pub fn evaluate_metric(spec: &MetricSpec, p: &ChartPoint, opts: &JetOptions) -> Result<MetricValue> {
    let jet = spec.jet_at(p, opts)?;
    let g = jet.value.clone();
    let g_inv = invert_hermitian(&g)?;
    let det = g.det_positive()?;
    Ok(MetricValue { point: p.clone(), g, g_inv, det, jet })
}

/// `log det g` at `p`, for the log-determinant route to the Chern–Ricci form.
pub fn log_det(spec: &MetricSpec, p: &ChartPoint) -> Result<f64> {
    let g = HermitianMatrix::new(spec.matrix_at(p)?)?;
    Ok(g.det_positive()?.ln())
}
