//! Closed-form values and derivatives of the built-in metrics.
//!
//! Indices: `d_hol[k][(a, b)] = ∂g_{a b̄}/∂z^k`, `d_antihol[l][(a, b)] = ∂g_{a b̄}/∂z̄^l`,
//! `d_mixed[k][l][(a, b)] = ∂²g_{a b̄}/∂z^k∂z̄^l`.

use alloc::vec::Vec;

use crate::linalg::CMat;
use crate::point::ChartPoint;
use crate::C64;

#[inline]
fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

pub(crate) struct ZooJet {
    pub g: CMat,
    pub d_hol: Vec<CMat>,
    pub d_antihol: Vec<CMat>,
    pub d_mixed: Vec<Vec<CMat>>,
}

fn assemble(
    n: usize,
    second: bool,
    g: impl Fn(usize, usize) -> C64,
    dh: impl Fn(usize, usize, usize) -> C64,
    da: impl Fn(usize, usize, usize) -> C64,
    dm: impl Fn(usize, usize, usize, usize) -> C64,
) -> ZooJet {
    ZooJet {
        g: CMat::from_fn(n, &g),
        d_hol: (0..n).map(|k| CMat::from_fn(n, |a, b| dh(k, a, b))).collect(),
        d_antihol: (0..n).map(|l| CMat::from_fn(n, |a, b| da(l, a, b))).collect(),
        d_mixed: if second {
            (0..n).map(|k| (0..n).map(|l| CMat::from_fn(n, |a, b| dm(k, l, a, b))).collect()).collect()
        } else {
            Vec::new()
        },
    }
}

/// `g_{a b̄} = δ_{ab} / |z|²`.
pub(crate) fn hopf_standard(p: &ChartPoint, second: bool) -> ZooJet {
    let n = p.dim();
    let z = p.coords();
    let r = p.norm_sqr();
    let (r2, r3) = (r * r, r * r * r);
    assemble(
        n,
        second,
        |a, b| C64::new(kd(a, b) / r, 0.0),
        |k, a, b| -z[k].conj() * (kd(a, b) / r2),
        |l, a, b| -z[l] * (kd(a, b) / r2),
        |k, l, a, b| -(C64::new(kd(k, l) / r2, 0.0) - z[k].conj() * z[l] * (2.0 / r3)) * kd(a, b),
    )
}

/// `g_{a b̄} = (1/|z|²)((n−1)/n·δ_{ab} + z̄^a z^b/(n|z|²))`.
pub(crate) fn hopf_perturbed(p: &ChartPoint, second: bool) -> ZooJet {
    let n = p.dim();
    let nf = n as f64;
    let c = (nf - 1.0) / nf;
    let z = p.coords();
    let zb = |k: usize| z[k].conj();
    let r = p.norm_sqr();
    let (r2, r3, r4) = (r * r, r * r * r, r * r * r * r);
    assemble(
        n,
        second,
        |a, b| C64::new(c * kd(a, b) / r, 0.0) + zb(a) * z[b] / (nf * r2),
        |k, a, b| {
            -zb(k) * (c * kd(a, b) / r2) + (zb(a) * (kd(b, k) / r2) - zb(a) * z[b] * zb(k) * (2.0 / r3)) / nf
        },
        |l, a, b| -z[l] * (c * kd(a, b) / r2) + (z[b] * (kd(a, l) / r2) - zb(a) * z[b] * z[l] * (2.0 / r3)) / nf,
        |k, l, a, b| {
            let base = -(C64::new(kd(k, l) / r2, 0.0) - zb(k) * z[l] * (2.0 / r3)) * (c * kd(a, b));
            let t1 = C64::new(kd(b, k) * kd(a, l) / r2, 0.0);
            let t2 = -zb(a) * z[l] * (2.0 * kd(b, k) / r3);
            let t3 = -z[b] * (zb(k) * kd(a, l) + zb(a) * kd(k, l)) * (2.0 / r3);
            let t4 = zb(a) * z[b] * zb(k) * z[l] * (6.0 / r4);
            base + (t1 + t2 + t3 + t4) / nf
        },
    )
}

/// Published inverse `g^{i j̄} = |z|²(n/(n−1)·δ_{ij} − z^i z̄^j/((n−1)|z|²))` of the perturbed Hopf metric.
pub fn hopf_perturbed_inverse(p: &ChartPoint) -> CMat {
    let n = p.dim() as f64;
    let z = p.coords();
    let r = p.norm_sqr();
    CMat::from_fn(p.dim(), |i, j| C64::new(r * n / (n - 1.0) * kd(i, j), 0.0) - z[i] * z[j].conj() / (n - 1.0))
}

/// `det(g)·|z|^{2n}` for the perturbed Hopf metric: `((n−1)/n)^{n−1}`.
pub fn hopf_perturbed_det_constant(n: usize) -> f64 {
    let nf = n as f64;
    let c = (nf - 1.0) / nf;
    (0..n - 1).map(|_| c).product()
}

/// Fubini–Study in the affine chart, `g_{a b̄} = ∂_a∂_b̄ log(1+|z|²) = δ_{ab}/s − z̄^a z^b/s²`, `s = 1+|z|²`.
pub(crate) fn fubini_study(p: &ChartPoint, second: bool) -> ZooJet {
    let n = p.dim();
    let z = p.coords();
    let zb = |k: usize| z[k].conj();
    let s = 1.0 + p.norm_sqr();
    let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
    assemble(
        n,
        second,
        |a, b| C64::new(kd(a, b) / s, 0.0) - zb(a) * z[b] / s2,
        |k, a, b| -zb(k) * (kd(a, b) / s2) - zb(a) * (kd(b, k) / s2) + zb(a) * z[b] * zb(k) * (2.0 / s3),
        |l, a, b| -z[l] * (kd(a, b) / s2) - z[b] * (kd(a, l) / s2) + zb(a) * z[b] * z[l] * (2.0 / s3),
        |k, l, a, b| {
            let t1 = -(C64::new(kd(k, l) / s2, 0.0) - zb(k) * z[l] * (2.0 / s3)) * kd(a, b);
            let t2 = -(C64::new(kd(a, l) / s2, 0.0) - zb(a) * z[l] * (2.0 / s3)) * kd(b, k);
            let t3 = z[b] * ((zb(k) * kd(a, l) + zb(a) * kd(k, l)) / s3 - zb(a) * zb(k) * z[l] * (3.0 / s4)) * 2.0;
            t1 + t2 + t3
        },
    )
}
