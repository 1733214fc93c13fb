//! Chart points and chart domains.

use alloc::vec::Vec;
use core::fmt;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result, C64};

/// A point `(z¹, …, zⁿ)` of a local holomorphic chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    coords: Vec<C64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::OutOfDomain("finite"));
        }
        Ok(Self { coords })
    }

    /// Builds a point from interleaved real coordinates `(x1, y1, x2, y2, …)`.
    pub fn from_real(xy: &[f64]) -> Result<Self> {
        Self::new(xy.chunks(2).map(|c| C64::new(c[0], *c.get(1).unwrap_or(&0.0))).collect())
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: alloc::vec![C64::new(0.0, 0.0); n] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    #[inline]
    pub fn z(&self, k: usize) -> C64 {
        self.coords[k]
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Real coordinate `a` of the underlying `ℝ^{2n}`: even `a` is `x_{a/2}`, odd is `y_{a/2}`.
    pub fn real(&self, a: usize) -> f64 {
        let c = self.coords[a / 2];
        if a.is_multiple_of(2) {
            c.re
        } else {
            c.im
        }
    }

    /// The point moved by `delta` along real coordinate `a`.
    pub fn displaced(&self, a: usize, delta: f64) -> Self {
        let mut coords = self.coords.clone();
        if a.is_multiple_of(2) {
            coords[a / 2].re += delta;
        } else {
            coords[a / 2].im += delta;
        }
        Self { coords }
    }

    /// The point scaled by a real factor (the Hopf deck action uses `1/2`).
    pub fn scaled(&self, s: f64) -> Self {
        Self { coords: self.coords.iter().map(|c| c * s).collect() }
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        f.write_str(")")
    }
}

/// Where a chart's metric is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// All of `ℂⁿ`.
    FullSpace,
    /// `ℂⁿ ∖ {0}`.
    Punctured,
    /// `{Im z¹ > 0} × ℂ^{n-1}`.
    HalfPlaneTimesPlane,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::FullSpace => "full-space",
            Domain::Punctured => "punctured",
            Domain::HalfPlaneTimesPlane => "half-plane-times-plane",
        }
    }

    /// Euclidean distance from `p` to the boundary (infinite for the full space).
    pub fn boundary_distance(self, p: &ChartPoint) -> f64 {
        match self {
            Domain::FullSpace => f64::INFINITY,
            Domain::Punctured => p.norm(),
            Domain::HalfPlaneTimesPlane => p.z(0).im,
        }
    }

    pub fn contains(self, p: &ChartPoint) -> bool {
        self.boundary_distance(p) > 0.0
    }

    /// True when the closed ball of the given radius around `p` lies inside the domain.
    pub fn contains_ball(self, p: &ChartPoint, radius: f64) -> bool {
        self.boundary_distance(p) > radius
    }

    pub fn check(self, p: &ChartPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(self.name()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_coordinates_interleave() {
        let p = ChartPoint::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.real(3), 4.0);
        let q = p.displaced(1, 0.5);
        assert_eq!(q.z(0), C64::new(1.0, 2.5));
        assert_eq!(p.norm_sqr(), 30.0);
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(ChartPoint::new(alloc::vec![]).is_err());
        assert!(ChartPoint::new(alloc::vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn domains() {
        let origin = ChartPoint::origin(2);
        assert!(Domain::FullSpace.contains(&origin));
        assert!(!Domain::Punctured.contains(&origin));
        let p = ChartPoint::from_real(&[0.0, 1.0, 5.0, 0.0]).unwrap();
        assert!(Domain::HalfPlaneTimesPlane.contains_ball(&p, 0.5));
        assert!(!Domain::HalfPlaneTimesPlane.contains_ball(&p, 1.5));
    }
}
