//! Derivative jets of metric fields.

use alloc::vec::Vec;

use crate::fd;
use crate::linalg::{CMat, HermitianMatrix};
use crate::point::{ChartPoint, Domain};
use crate::{Error, Result, C64};

/// How metric derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivMode {
    /// Closed-form derivatives where the metric publishes them.
    Analytic,
    /// Central finite differences of the metric entries.
    FiniteDifference,
}

impl DerivMode {
    pub fn name(self) -> &'static str {
        match self {
            DerivMode::Analytic => "analytic",
            DerivMode::FiniteDifference => "fd",
        }
    }
}

impl core::str::FromStr for DerivMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(DerivMode::Analytic),
            "fd" | "finite-difference" => Ok(DerivMode::FiniteDifference),
            other => Err(Error::Unsupported(alloc::format!("derivative mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSource {
    Analytic,
    FiniteDifference,
}

/// What a caller needs from a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetOptions {
    pub mode: DerivMode,
    /// Finite-difference step; `None` means [`fd::default_step`] at the evaluation point.
    pub step: Option<f64>,
    /// Populate `d_mixed`.
    pub second: bool,
    /// Populate `d_holhol` (always by finite differences).
    pub holhol: bool,
}

impl JetOptions {
    pub fn new(mode: DerivMode) -> Self {
        Self { mode, step: None, second: true, holhol: false }
    }

    pub fn analytic() -> Self {
        Self::new(DerivMode::Analytic)
    }

    pub fn fd() -> Self {
        Self::new(DerivMode::FiniteDifference)
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = Some(step);
        self
    }

    pub fn first_order(mut self) -> Self {
        self.second = false;
        self.holhol = false;
        self
    }

    pub fn step_at(&self, p: &ChartPoint) -> f64 {
        self.step.unwrap_or_else(|| fd::default_step(p))
    }

    /// Same options with the step fixed to its value at `p`, so nested
    /// evaluations around `p` share one step.
    pub fn pinned(self, p: &ChartPoint) -> Self {
        Self { step: Some(self.step_at(p)), ..self }
    }
}

/// `g_{i j̄}` and its Wirtinger derivatives at a point.
///
/// `d_hol[k] = ∂g/∂z^k`, `d_antihol[k] = ∂g/∂z̄^k`, `d_mixed[i][j] = ∂²g/∂z^i∂z̄^j`,
/// `d_holhol[i][j] = ∂²g/∂z^i∂z^j`. `d_mixed` is empty for first-order jets.
#[derive(Debug, Clone)]
pub struct DerivativeJet {
    pub value: HermitianMatrix,
    pub d_hol: Vec<CMat>,
    pub d_antihol: Vec<CMat>,
    pub d_mixed: Vec<Vec<CMat>>,
    pub d_holhol: Option<Vec<Vec<CMat>>>,
    pub source: JetSource,
    pub step: f64,
}

impl DerivativeJet {
    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn has_second(&self) -> bool {
        !self.d_mixed.is_empty()
    }

    /// Largest `|d_antihol[j][a][b] − conj(d_hol[j][b][a])|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.d_hol
            .iter()
            .zip(&self.d_antihol)
            .map(|(h, a)| a.max_abs_diff(&h.conj_transpose()))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference between two jets over every populated block.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = self.value.matrix().max_abs_diff(other.value.matrix());
        for (a, b) in self.d_hol.iter().zip(&other.d_hol) {
            m = m.max(a.max_abs_diff(b));
        }
        for (a, b) in self.d_antihol.iter().zip(&other.d_antihol) {
            m = m.max(a.max_abs_diff(b));
        }
        for (ra, rb) in self.d_mixed.iter().zip(&other.d_mixed) {
            for (a, b) in ra.iter().zip(rb) {
                m = m.max(a.max_abs_diff(b));
            }
        }
        m
    }

    /// A jet of zeros around a constant value.
    pub fn constant(value: HermitianMatrix, source: JetSource, step: f64, second: bool) -> Self {
        let n = value.dim();
        let z = CMat::zeros(n);
        Self {
            d_hol: alloc::vec![z.clone(); n],
            d_antihol: alloc::vec![z.clone(); n],
            d_mixed: if second { alloc::vec![alloc::vec![z; n]; n] } else { Vec::new() },
            d_holhol: None,
            value,
            source,
            step,
        }
    }
}

/// Finite-difference jet of a matrix field.
pub fn fd_jet(
    field: impl Fn(&ChartPoint) -> Result<CMat>,
    p: &ChartPoint,
    value: HermitianMatrix,
    step: f64,
    domain: Domain,
    second: bool,
    holhol: bool,
) -> Result<DerivativeJet> {
    let grad = fd::gradient(&field, p, step, domain)?;
    let (d_mixed, d_holhol) = if second || holhol {
        let h = fd::hessian(&field, p, step, domain)?;
        (if second { h.mixed } else { Vec::new() }, holhol.then_some(h.holhol))
    } else {
        (Vec::new(), None)
    };
    Ok(DerivativeJet {
        value,
        d_hol: grad.hol,
        d_antihol: grad.antihol,
        d_mixed,
        d_holhol,
        source: JetSource::FiniteDifference,
        step,
    })
}

/// First and mixed second Wirtinger derivatives of a real scalar field.
#[derive(Debug, Clone)]
pub struct ScalarJet {
    pub value: f64,
    pub d_hol: Vec<C64>,
    pub d_antihol: Vec<C64>,
    pub d_mixed: CMat,
}

pub fn scalar_jet(
    field: impl Fn(&ChartPoint) -> Result<f64>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
    second: bool,
) -> Result<ScalarJet> {
    let lifted = |q: &ChartPoint| field(q).map(|v| C64::new(v, 0.0));
    let value = field(p)?;
    let g = fd::gradient(lifted, p, step, domain)?;
    let n = p.dim();
    let d_mixed = if second {
        let h = fd::hessian(lifted, p, step, domain)?;
        CMat::from_fn(n, |i, j| h.mixed[i][j])
    } else {
        CMat::zeros(n)
    };
    Ok(ScalarJet { value, d_hol: g.hol, d_antihol: g.antihol, d_mixed })
}
