//! Levi-Civita connection coefficients on `T^{1,0}`.
//!
//! `Γ^k_{ij} = ½ g^{k l̄}(∂_i g_{j l̄} + ∂_j g_{i l̄})` and
//! `Γ^k_{ī j} = ½ g^{k l̄}(∂_ī g_{j l̄} − ∂_l̄ g_{j ī})`, contracted from explicit jets.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::CMat;
use crate::metric::MetricValue;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoeffs {
    n: usize,
    /// `Γ^k_{ij}` at `(k * n + i) * n + j`.
    gamma_hol: Vec<C64>,
    /// `Γ^k_{ī j}` at `(k * n + i) * n + j`.
    gamma_mixed: Vec<C64>,
}

impl ConnectionCoeffs {
    pub fn zeros(n: usize) -> Self {
        Self { n, gamma_hol: vec![C64::new(0.0, 0.0); n * n * n], gamma_mixed: vec![C64::new(0.0, 0.0); n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    /// `Γ^k_{ij}`.
    pub fn hol(&self, k: usize, i: usize, j: usize) -> C64 {
        self.gamma_hol[self.at(k, i, j)]
    }

    /// `Γ^k_{ī j}`.
    pub fn mixed(&self, k: usize, i: usize, j: usize) -> C64 {
        self.gamma_mixed[self.at(k, i, j)]
    }

    pub fn hol_slice(&self) -> &[C64] {
        &self.gamma_hol
    }

    pub fn mixed_slice(&self) -> &[C64] {
        &self.gamma_mixed
    }

    /// Both families concatenated, `hol` first; the layout used for differencing.
    pub fn to_flat(&self) -> Vec<C64> {
        let mut v = self.gamma_hol.clone();
        v.extend_from_slice(&self.gamma_mixed);
        v
    }

    /// `Σ_k Γ^k_{ī k}` for each `i`.
    pub fn mixed_trace(&self) -> Vec<C64> {
        (0..self.n).map(|i| (0..self.n).map(|k| self.mixed(k, i, k)).sum()).collect()
    }

    pub fn max_abs_mixed(&self) -> f64 {
        self.gamma_mixed.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|Γ^k_{ij} − Γ^k_{ji}|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut m: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m = m.max((self.hol(k, i, j) - self.hol(k, j, i)).norm());
                }
            }
        }
        m
    }

    /// `∂_k g_{i j̄} = Γ^s_{ki} g_{s j̄} + conj(Γ^s_{k̄ j}) g_{i s̄}`, the first derivative
    /// that metric compatibility predicts from the two coefficient families.
    pub fn reconstruct_d_hol(&self, g: &CMat) -> Vec<CMat> {
        let n = self.n;
        (0..n)
            .map(|k| {
                CMat::from_fn(n, |i, j| {
                    (0..n).map(|s| self.hol(s, k, i) * g[(s, j)] + self.mixed(s, k, j).conj() * g[(i, s)]).sum()
                })
            })
            .collect()
    }
}

/// Levi-Civita coefficients from the metric's first-order jet and `g^{-1}` at the same point.
pub fn lc_coefficients(m: &MetricValue) -> ConnectionCoeffs {
    let n = m.dim();
    let gi = m.g_inv.matrix();
    let dh = &m.jet.d_hol;
    let da = &m.jet.d_antihol;
    let half = 0.5;
    let mut c = ConnectionCoeffs::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let v: C64 = (0..n).map(|l| gi[(k, l)] * (dh[i][(j, l)] + dh[j][(i, l)])).sum::<C64>() * half;
                let a = c.at(k, i, j);
                let b = c.at(k, j, i);
                c.gamma_hol[a] = v;
                c.gamma_hol[b] = v;
            }
            for j in 0..n {
                let v: C64 = (0..n).map(|l| gi[(k, l)] * (da[i][(j, l)] - da[l][(j, i)])).sum::<C64>() * half;
                let a = c.at(k, i, j);
                c.gamma_mixed[a] = v;
            }
        }
    }
    c
}

/// Largest entrywise gap between the jet's `∂g/∂z^k` and [`ConnectionCoeffs::reconstruct_d_hol`].
pub fn compatibility_defect(m: &MetricValue, c: &ConnectionCoeffs) -> f64 {
    c.reconstruct_d_hol(m.g.matrix())
        .iter()
        .zip(&m.jet.d_hol)
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max)
}
