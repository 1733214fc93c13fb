//! Finite-difference Wirtinger derivatives.
//!
//! Fields are non-holomorphic functions of `(z, z̄)`, so every derivative is
//! taken by second-order central differences in the `2n` real coordinates and
//! recombined with `∂/∂z = ½(∂/∂x − i∂/∂y)`, `∂/∂z̄ = ½(∂/∂x + i∂/∂y)`.
//! Second derivatives come from the real Hessian built by nesting two central
//! differences, which is a 4-point cross stencil for distinct coordinates and
//! a `±2h` three-point stencil on the diagonal. Truncation error is `O(h²)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::CMat;
use crate::point::{ChartPoint, Domain};
use crate::{Error, Result, C64};

/// Default step `1e-4 · max(1, |p|)`.
pub fn default_step(p: &ChartPoint) -> f64 {
    1e-4 * p.norm().max(1.0)
}

/// Values that can be finite-differenced: closed under complex linear combination.
pub trait FieldValue: Clone {
    /// `a·self + b·other`.
    fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self;
}

impl FieldValue for C64 {
    fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        a * self + b * other
    }
}

impl FieldValue for CMat {
    fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        CMat::lin_comb(self, a, other, b)
    }
}

impl FieldValue for Vec<C64> {
    fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(x, y)| a * x + b * y).collect()
    }
}

/// Holomorphic or antiholomorphic Wirtinger direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Holomorphic,
    Antiholomorphic,
}

/// First Wirtinger derivatives `∂f/∂z^k` and `∂f/∂z̄^k`, `k = 0..n`.
#[derive(Debug, Clone)]
pub struct Gradient<T> {
    pub hol: Vec<T>,
    pub antihol: Vec<T>,
}

/// Second Wirtinger derivatives `∂²f/∂z^i∂z̄^j` and `∂²f/∂z^i∂z^j`.
#[derive(Debug, Clone)]
pub struct Hessian<T> {
    pub mixed: Vec<Vec<T>>,
    pub holhol: Vec<Vec<T>>,
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep(step))
    }
}

fn eval_at<T>(field: &impl Fn(&ChartPoint) -> Result<T>, q: &ChartPoint) -> Result<T> {
    field(q).map_err(|e| match e {
        Error::OutOfDomain(_) => Error::StencilOutsideDomain,
        other => other,
    })
}

fn wirtinger<T: FieldValue>(dx: &T, dy: &T, dir: Direction) -> T {
    let half = C64::new(0.5, 0.0);
    let iy = match dir {
        Direction::Holomorphic => C64::new(0.0, -0.5),
        Direction::Antiholomorphic => C64::new(0.0, 0.5),
    };
    dx.lin_comb(half, dy, iy)
}

/// Central difference along real coordinate `a`.
fn real_partial<T: FieldValue>(
    field: &impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    a: usize,
    h: f64,
) -> Result<T> {
    let fp = eval_at(field, &p.displaced(a, h))?;
    let fm = eval_at(field, &p.displaced(a, -h))?;
    let s = C64::new(0.5 / h, 0.0);
    Ok(fp.lin_comb(s, &fm, -s))
}

/// All first Wirtinger derivatives of `field` at `p`.
pub fn gradient<T: FieldValue>(
    field: impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
) -> Result<Gradient<T>> {
    check_step(step)?;
    if !domain.contains_ball(p, step) {
        return Err(Error::StencilOutsideDomain);
    }
    let n = p.dim();
    let mut hol = Vec::with_capacity(n);
    let mut antihol = Vec::with_capacity(n);
    for k in 0..n {
        let dx = real_partial(&field, p, 2 * k, step)?;
        let dy = real_partial(&field, p, 2 * k + 1, step)?;
        hol.push(wirtinger(&dx, &dy, Direction::Holomorphic));
        antihol.push(wirtinger(&dx, &dy, Direction::Antiholomorphic));
    }
    Ok(Gradient { hol, antihol })
}

/// [`gradient`] with one Richardson step over `h` and `2h`, cancelling the `O(h²)` term.
pub fn gradient_richardson<T: FieldValue>(
    field: impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
) -> Result<Gradient<T>> {
    let fine = gradient(&field, p, step, domain)?;
    let coarse = gradient(&field, p, 2.0 * step, domain)?;
    let (a, b) = (C64::new(4.0 / 3.0, 0.0), C64::new(-1.0 / 3.0, 0.0));
    let mix = |f: Vec<T>, c: Vec<T>| f.iter().zip(&c).map(|(x, y)| x.lin_comb(a, y, b)).collect();
    Ok(Gradient { hol: mix(fine.hol, coarse.hol), antihol: mix(fine.antihol, coarse.antihol) })
}

/// A single first Wirtinger derivative (index `k` is zero-based).
pub fn wirtinger_derivative<T: FieldValue>(
    field: impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    k: usize,
    dir: Direction,
    step: f64,
    domain: Domain,
) -> Result<T> {
    check_step(step)?;
    if k >= p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: k + 1 });
    }
    if !domain.contains_ball(p, step) {
        return Err(Error::StencilOutsideDomain);
    }
    let dx = real_partial(&field, p, 2 * k, step)?;
    let dy = real_partial(&field, p, 2 * k + 1, step)?;
    Ok(wirtinger(&dx, &dy, dir))
}

/// Real Hessian `D_a D_b f` over the `2n` real coordinates, from nested central differences.
#[allow(clippy::needless_range_loop)]
fn real_hessian<T: FieldValue>(
    field: &impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    h: f64,
) -> Result<Vec<Vec<T>>> {
    let m = 2 * p.dim();
    let centre = eval_at(field, p)?;
    let mut hess: Vec<Vec<Option<T>>> = vec![vec![None; m]; m];
    let s_diag = C64::new(0.25 / (h * h), 0.0);
    for a in 0..m {
        let fp = eval_at(field, &p.displaced(a, 2.0 * h))?;
        let fm = eval_at(field, &p.displaced(a, -2.0 * h))?;
        // (f(+2h) − 2f(0) + f(−2h)) / 4h²
        let sum = fp.lin_comb(s_diag, &fm, s_diag);
        hess[a][a] = Some(sum.lin_comb(C64::new(1.0, 0.0), &centre, -2.0 * s_diag));
        for b in a + 1..m {
            let pa = p.displaced(a, h);
            let ma = p.displaced(a, -h);
            let fpp = eval_at(field, &pa.displaced(b, h))?;
            let fpm = eval_at(field, &pa.displaced(b, -h))?;
            let fmp = eval_at(field, &ma.displaced(b, h))?;
            let fmm = eval_at(field, &ma.displaced(b, -h))?;
            let plus = fpp.lin_comb(s_diag, &fpm, -s_diag);
            let minus = fmp.lin_comb(s_diag, &fmm, -s_diag);
            let v = plus.lin_comb(C64::new(1.0, 0.0), &minus, C64::new(-1.0, 0.0));
            hess[b][a] = Some(v.clone());
            hess[a][b] = Some(v);
        }
    }
    Ok(hess.into_iter().map(|row| row.into_iter().map(|v| v.expect("filled")).collect()).collect())
}

/// Mixed `∂²f/∂z^i∂z̄^j` and pure `∂²f/∂z^i∂z^j` derivatives of `field` at `p`.
pub fn hessian<T: FieldValue>(
    field: impl Fn(&ChartPoint) -> Result<T>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
) -> Result<Hessian<T>> {
    check_step(step)?;
    if !domain.contains_ball(p, 2.0 * step) {
        return Err(Error::StencilOutsideDomain);
    }
    let n = p.dim();
    let h = real_hessian(&field, p, step)?;
    let q = C64::new(0.25, 0.0);
    let qi = C64::new(0.0, 0.25);
    let one = C64::new(1.0, 0.0);
    let mut mixed = Vec::with_capacity(n);
    let mut holhol = Vec::with_capacity(n);
    for i in 0..n {
        let (xi, yi) = (2 * i, 2 * i + 1);
        let mut mrow = Vec::with_capacity(n);
        let mut hrow = Vec::with_capacity(n);
        for j in 0..n {
            let (xj, yj) = (2 * j, 2 * j + 1);
            // ¼(D_xi − iD_yi)(D_xj + iD_yj)
            let a = h[xi][xj].lin_comb(q, &h[yi][yj], q);
            let b = h[xi][yj].lin_comb(qi, &h[yi][xj], -qi);
            mrow.push(a.lin_comb(one, &b, one));
            // ¼(D_xi − iD_yi)(D_xj − iD_yj)
            let a = h[xi][xj].lin_comb(q, &h[yi][yj], -q);
            let b = h[xi][yj].lin_comb(-qi, &h[yi][xj], -qi);
            hrow.push(a.lin_comb(one, &b, one));
        }
        mixed.push(mrow);
        holhol.push(hrow);
    }
    Ok(Hessian { mixed, holhol })
}

/// `∂²f/∂z^i∂z̄^j` for a real scalar field, as a matrix indexed `[i][j]`.
pub fn ddbar_scalar(
    field: impl Fn(&ChartPoint) -> Result<f64>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
) -> Result<CMat> {
    let h = hessian(|q| field(q).map(|v| C64::new(v, 0.0)), p, step, domain)?;
    Ok(CMat::from_fn(p.dim(), |i, j| h.mixed[i][j]))
}

/// [`ddbar_scalar`] with one Richardson step over `h` and `2h`, cancelling the `O(h²)` term.
pub fn ddbar_scalar_richardson(
    field: impl Fn(&ChartPoint) -> Result<f64>,
    p: &ChartPoint,
    step: f64,
    domain: Domain,
) -> Result<CMat> {
    let fine = ddbar_scalar(&field, p, step, domain)?;
    let coarse = ddbar_scalar(&field, p, 2.0 * step, domain)?;
    Ok(fine.lin_comb(C64::new(4.0 / 3.0, 0.0), &coarse, C64::new(-1.0 / 3.0, 0.0)))
}
