//! Differential forms in coordinates.
//!
//! [`PqForm`] is a general `(p,q)`-form `Σ c_{IJ} dz^I ∧ dz̄^J` keyed by index bitmasks,
//! with `I` and `J` increasing. The fixed-shape types [`Form10`], [`Form01`], [`Form11`]
//! and [`Form21`] carry the quantities that appear in the curvature identities.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::fd::FieldValue;
use crate::linalg::CMat;
use crate::{C64, I};

const ZERO: C64 = C64::new(0.0, 0.0);

/// `a_i dz^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form10 {
    pub coeff: Vec<C64>,
}

/// `b_j dz̄^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form01 {
    pub coeff: Vec<C64>,
}

impl Form10 {
    pub fn zeros(n: usize) -> Self {
        Self { coeff: alloc::vec![ZERO; n] }
    }

    pub fn dim(&self) -> usize {
        self.coeff.len()
    }

    pub fn conj(&self) -> Form01 {
        Form01 { coeff: self.coeff.iter().map(|c| c.conj()).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeff.iter().zip(&other.coeff).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `|a|² = g^{i j̄} a_i conj(a_j)`.
    pub fn norm_sqr(&self, g_inv: &CMat) -> C64 {
        let n = self.dim();
        let mut s = ZERO;
        for i in 0..n {
            for j in 0..n {
                s += g_inv[(i, j)] * self.coeff[i] * self.coeff[j].conj();
            }
        }
        s
    }
}

impl Form01 {
    pub fn conj(&self) -> Form10 {
        Form10 { coeff: self.coeff.iter().map(|c| c.conj()).collect() }
    }
}

/// `√−1 A_{i j̄} dz^i ∧ dz̄^j`; the `√−1` is implicit and `coeff` holds `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form11 {
    pub coeff: CMat,
}

impl Form11 {
    pub fn new(coeff: CMat) -> Self {
        Self { coeff }
    }

    pub fn zeros(n: usize) -> Self {
        Self { coeff: CMat::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.coeff.dim()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeff.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeff.max_abs_diff(&other.coeff)
    }

    /// Real forms have Hermitian coefficient matrices.
    pub fn hermitian_defect(&self) -> f64 {
        self.coeff.hermitian_defect()
    }

    /// The form with coefficient `A†`.
    pub fn conj_transpose(&self) -> Self {
        Self { coeff: self.coeff.conj_transpose() }
    }

    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        Self { coeff: self.coeff.lin_comb(C64::new(a, 0.0), &other.coeff, C64::new(b, 0.0)) }
    }

    /// `Σ g^{i j̄} A_{i j̄}`, which is `⟨A, ω⟩`.
    pub fn trace(&self, g_inv: &CMat) -> C64 {
        let n = self.dim();
        let mut s = ZERO;
        for i in 0..n {
            for j in 0..n {
                s += g_inv[(i, j)] * self.coeff[(i, j)];
            }
        }
        s
    }

    /// `⟨a, b⟩ = Σ a_{i j̄} conj(b_{k l̄}) g^{i k̄} g^{l j̄}`.
    pub fn inner(&self, other: &Self, g_inv: &CMat) -> C64 {
        let n = self.dim();
        let mut s = ZERO;
        for i in 0..n {
            for j in 0..n {
                let a = self.coeff[(i, j)];
                for k in 0..n {
                    let gik = g_inv[(i, k)];
                    for l in 0..n {
                        s += a * other.coeff[(k, l)].conj() * gik * g_inv[(l, j)];
                    }
                }
            }
        }
        s
    }

    pub fn to_pq(&self) -> PqForm {
        let n = self.dim();
        let mut f = PqForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                f.add_term(1 << i, 1 << j, I * self.coeff[(i, j)]);
            }
        }
        f
    }
}

/// `T_{k i, j̄} dz^k ∧ dz^i ∧ dz̄^j` with `T_{k i, j̄} = −T_{i k, j̄}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form21 {
    n: usize,
    data: Vec<C64>,
}

impl Form21 {
    /// Builds the form from `f(k, i, j)` for `k < i`; the rest follows by antisymmetry.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let mut data = alloc::vec![ZERO; n * n * n];
        for k in 0..n {
            for i in k + 1..n {
                for j in 0..n {
                    let v = f(k, i, j);
                    data[(k * n + i) * n + j] = v;
                    data[(i * n + k) * n + j] = -v;
                }
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> C64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut m: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m = m.max((self.get(k, i, j) + self.get(i, k, j)).norm());
                }
            }
        }
        m
    }
}

/// Number of pairs `(a, b)` with `a ∈ x`, `b ∈ y`, `a > b`, modulo 2.
fn merge_parity(x: u32, y: u32) -> u32 {
    let mut count = 0;
    let mut rest = y;
    while rest != 0 {
        let b = rest.trailing_zeros();
        count += (x >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    count & 1
}

/// A complex differential form on an `n`-dimensional chart.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PqForm {
    n: usize,
    terms: BTreeMap<(u32, u32), C64>,
}

impl PqForm {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c · dz^I ∧ dz̄^J` for index bitmasks `I`, `J`.
    pub fn monomial(n: usize, i: u32, j: u32, c: C64) -> Self {
        let mut f = Self::zero(n);
        f.add_term(i, j, c);
        f
    }

    pub fn dz(n: usize, k: usize) -> Self {
        Self::monomial(n, 1 << k, 0, C64::new(1.0, 0.0))
    }

    pub fn dzbar(n: usize, k: usize) -> Self {
        Self::monomial(n, 0, 1 << k, C64::new(1.0, 0.0))
    }

    /// `ω = √−1 g_{i j̄} dz^i ∧ dz̄^j`.
    pub fn kahler_form(g: &CMat) -> Self {
        Form11::new(g.clone()).to_pq()
    }

    /// `Π_k (√−1 dz^k ∧ dz̄^k)`, the reference top form.
    pub fn reference_volume(n: usize) -> Self {
        (0..n).fold(Self::monomial(n, 0, 0, C64::new(1.0, 0.0)), |acc, k| {
            acc.wedge(&Self::monomial(n, 1 << k, 1 << k, I))
        })
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C64) {
        if c == ZERO {
            return;
        }
        *self.terms.entry((i, j)).or_insert(ZERO) += c;
    }

    pub fn coefficient(&self, i: u32, j: u32) -> C64 {
        self.terms.get(&(i, j)).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C64)> {
        self.terms.iter()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n.max(other.n));
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &other.terms {
                if i & k != 0 || j & l != 0 {
                    continue;
                }
                // dz^I dz̄^J dz^K dz̄^L = (−1)^{|J||K|} dz^I dz^K dz̄^J dz̄^L
                let parity = (j.count_ones() * k.count_ones() + merge_parity(i, k) + merge_parity(j, l)) & 1;
                let sign = if parity == 1 { -1.0 } else { 1.0 };
                out.add_term(i | k, j | l, a * b * sign);
            }
        }
        out
    }

    /// `self ∧ self ∧ … ` (`m` factors); `m = 0` gives the constant 1.
    pub fn power(&self, m: usize) -> Self {
        (0..m).fold(Self::monomial(self.n, 0, 0, C64::new(1.0, 0.0)), |acc, _| acc.wedge(self))
    }

    /// The coefficient `c` with `self = c · Π_k(√−1 dz^k ∧ dz̄^k)` for a top-degree form.
    pub fn top_coefficient(&self) -> C64 {
        let full = (1u32 << self.n) - 1;
        let reference = Self::reference_volume(self.n).coefficient(full, full);
        self.coefficient(full, full) / reference
    }

    /// `Σ_k dz^k ∧ parts[k]`, the holomorphic exterior derivative given `∂_k` of the coefficients.
    pub fn d_hol(parts: &[PqForm]) -> Self {
        let n = parts.len();
        parts.iter().enumerate().fold(Self::zero(n), |acc, (k, f)| acc.add(&Self::dz(n, k).wedge(f)))
    }

    /// `Σ_l dz̄^l ∧ parts[l]`.
    pub fn d_antihol(parts: &[PqForm]) -> Self {
        let n = parts.len();
        parts.iter().enumerate().fold(Self::zero(n), |acc, (l, f)| acc.add(&Self::dzbar(n, l).wedge(f)))
    }

    /// `Σ_{k,l} dz^k ∧ dz̄^l ∧ parts[k][l]`, i.e. `∂∂̄` given the mixed second derivatives.
    pub fn ddbar(parts: &[Vec<PqForm>]) -> Self {
        let n = parts.len();
        let mut out = Self::zero(n);
        for (k, row) in parts.iter().enumerate() {
            for (l, f) in row.iter().enumerate() {
                out = out.add(&Self::dz(n, k).wedge(&Self::dzbar(n, l)).wedge(f));
            }
        }
        out
    }
}

impl FieldValue for PqForm {
    fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        let mut out = Self::zero(self.n.max(other.n));
        for (&(i, j), &c) in &self.terms {
            out.add_term(i, j, c * a);
        }
        for (&(i, j), &c) in &other.terms {
            out.add_term(i, j, c * b);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn wedge_signs() {
        let n = 2;
        let a = PqForm::dz(n, 0);
        let b = PqForm::dz(n, 1);
        assert_eq!(a.wedge(&b).coefficient(0b11, 0), c(1.0));
        assert_eq!(b.wedge(&a).coefficient(0b11, 0), c(-1.0));
        assert_eq!(a.wedge(&a).max_abs(), 0.0);
        // dz̄¹ ∧ dz² = −dz² ∧ dz̄¹
        let f = PqForm::dzbar(n, 0).wedge(&PqForm::dz(n, 1));
        assert_eq!(f.coefficient(0b10, 0b01), c(-1.0));
    }

    #[test]
    fn omega_power_is_det() {
        // ω^n = n! det g · Π(√−1 dz^k ∧ dz̄^k)
        let g = CMat::from_rows(&[
            &[c(2.0), C64::new(0.3, 0.4), c(0.1)],
            &[C64::new(0.3, -0.4), c(1.5), C64::new(0.0, 0.2)],
            &[c(0.1), C64::new(0.0, -0.2), c(1.0)],
        ]);
        let w = PqForm::kahler_form(&g);
        let top = w.power(3).top_coefficient();
        assert!((top - g.det() * 6.0).norm() < 1e-12);
    }

    #[test]
    fn ricci_wedge_omega_is_trace() {
        // A ∧ ω^{n−1} = (n−1)! (g^{i j̄} A_{i j̄}) det g · vol
        let g = CMat::from_rows(&[&[c(2.0), C64::new(0.3, 0.4)], &[C64::new(0.3, -0.4), c(1.5)]]);
        let a = CMat::from_rows(&[&[c(0.7), C64::new(-0.1, 0.2)], &[C64::new(-0.1, -0.2), c(-0.4)]]);
        let gi = crate::linalg::invert_hermitian(&crate::linalg::HermitianMatrix::new(g.clone()).unwrap()).unwrap();
        let lhs = Form11::new(a.clone()).to_pq().wedge(&PqForm::kahler_form(&g)).top_coefficient();
        let rhs = Form11::new(a).trace(gi.matrix()) * g.det();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn form_types() {
        let a = Form10 { coeff: alloc::vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5)] };
        assert_eq!(a.conj().conj(), a);
        let t = Form21::from_upper(3, |k, i, j| C64::new((k + 2 * i) as f64, j as f64));
        assert_eq!(t.antisymmetry_defect(), 0.0);
        assert_eq!(t.get(1, 1, 0), ZERO);
        let g = CMat::identity(2);
        let w = Form11::new(g.clone());
        assert_eq!(w.inner(&w, &g), c(2.0));
    }
}
