//! Small dense complex matrices.
//!
//! Matrices here are at most 8×8, so everything is a plain row-major `Vec`.
//! The Hermitian-metric convention is `entries[i][j] = g_{i j̄}`; the inverse
//! metric is stored so that `Σ_q g^{i q̄} g_{k q̄} = δ_{ik}`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Tolerance for the conjugate-symmetry invariant of [`HermitianMatrix`].
pub const TAU_SYM: f64 = 1e-12;

/// Dense `n×n` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "ragged rows");
        Self::from_fn(n, |i, j| rows[i][j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|M_{ij} − conj(M_{ji})|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        match Lu::factor(self) {
            Some(lu) => lu.det(),
            None => C64::new(0.0, 0.0),
        }
    }

    /// General inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        Lu::factor(self).ok_or(Error::Degenerate).map(|lu| lu.inverse())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        self.lin_comb(C64::new(1.0, 0.0), rhs, C64::new(1.0, 0.0))
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self.lin_comb(C64::new(1.0, 0.0), rhs, C64::new(-1.0, 0.0))
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        let n = self.n;
        CMat::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn factor(m: &CMat) -> Option<Self> {
        let n = m.n;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = m.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        for col in 0..n {
            let (pivot, best) = (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= scale * f64::EPSILON * (n as f64) {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = tmp;
                }
                perm.swap(col, pivot);
                sign = -sign;
            }
            let d = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / d;
                lu[(r, col)] = factor;
                for j in col + 1..n {
                    let v = lu[(col, j)];
                    lu[(r, j)] -= factor * v;
                }
            }
        }
        Some(Self { lu, perm, sign })
    }

    fn det(&self) -> C64 {
        (0..self.lu.n).map(|i| self.lu[(i, i)]).product::<C64>() * self.sign
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let v = x[k];
                x[i] -= self.lu[(i, k)] * v;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = x[k];
                x[i] -= self.lu[(i, k)] * v;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    fn inverse(&self) -> CMat {
        let n = self.lu.n;
        let mut inv = CMat::zeros(n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Lower-triangular Cholesky factor `L` with `M = L L*`, or `None` when `M`
/// is not positive definite.
pub fn cholesky(m: &CMat) -> Option<CMat> {
    let n = m.dim();
    let mut l = CMat::zeros(n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 || d.is_infinite() {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(l)
}

/// A Hermitian matrix `g_{i j̄}` (or an inverse metric `g^{i j̄}`).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    /// Wraps a matrix, checking conjugate symmetry within [`TAU_SYM`] relative to its size.
    pub fn new(m: CMat) -> Result<Self> {
        if m.hermitian_defect() > TAU_SYM * m.max_abs().max(1.0) {
            return Err(Error::Degenerate);
        }
        Ok(Self(m))
    }

    /// Wraps a matrix after replacing it by its Hermitian part `(M + M*)/2`.
    pub fn symmetrized(m: CMat) -> Self {
        let h = m.lin_comb(C64::new(0.5, 0.0), &m.conj_transpose(), C64::new(0.5, 0.0));
        Self(h)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_positive_definite(&self) -> bool {
        cholesky(&self.0).is_some()
    }

    /// `det g`, real and positive for a positive-definite matrix.
    pub fn det_positive(&self) -> Result<f64> {
        let l = cholesky(&self.0).ok_or(Error::Degenerate)?;
        Ok((0..self.dim()).map(|i| l[(i, i)].re * l[(i, i)].re).product())
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Inverse metric `g^{i j̄}` of a positive-definite Hermitian `g_{i j̄}`.
///
/// Positive definiteness is tested by a Cholesky attempt; the inverse itself
/// comes from LU with partial pivoting. The result `G` satisfies
/// `Σ_q G[i][q]·M[k][q] = δ_{ik}`, i.e. it is the transpose of the plain
/// matrix inverse.
pub fn invert_hermitian(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    if !m.is_positive_definite() {
        return Err(Error::Degenerate);
    }
    let inv = m.matrix().inverse()?;
    Ok(HermitianMatrix::symmetrized(inv.transpose()))
}
