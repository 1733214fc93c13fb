//! Seeded sampling of chart points.

use lcricci_core::metric::{MetricKind, MetricSpec};
use lcricci_core::point::ChartPoint;
use lcricci_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Where sample points are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    /// `inner ≤ |z| ≤ outer`, uniform in Euclidean volume.
    Annulus { inner: f64, outer: f64 },
    /// Each `|z_k| < radius`, uniform in each disc.
    Polydisc { radius: f64 },
    /// `Re w ∈ [−1, 1]`, `Im w ∈ [im_lo, im_hi]`, the other coordinates in the unit disc.
    Strip { im_lo: f64, im_hi: f64 },
}

impl Region {
    /// The default region for a metric: the Hopf annulus, the Inoue strip, or the unit polydisc.
    pub fn for_spec(spec: &MetricSpec) -> Self {
        if spec.is_hopf_family() {
            Region::Annulus { inner: 0.6, outer: 1.4 }
        } else if matches!(spec.kind(), MetricKind::InoueCanonical) {
            Region::Strip { im_lo: 0.5, im_hi: 2.0 }
        } else {
            Region::Polydisc { radius: 1.0 }
        }
    }
}

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

/// `count` points in `region` of `ℂⁿ`, reproducible from `seed`.
pub fn sample_points(region: Region, n: usize, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<C64> = match region {
                Region::Annulus { inner, outer } => {
                    let v: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
                    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let e = 2.0 * n as f64;
                    let (a, b) = (inner.powf(e), outer.powf(e));
                    let rho = (a + rng.random::<f64>() * (b - a)).powf(1.0 / e);
                    v.chunks(2).map(|c| C64::new(c[0], c[1]) * (rho / len)).collect()
                }
                Region::Polydisc { radius } => (0..n).map(|_| disc(&mut rng, radius)).collect(),
                Region::Strip { im_lo, im_hi } => {
                    let w = C64::new(rng.random_range(-1.0..=1.0), rng.random_range(im_lo..=im_hi));
                    std::iter::once(w).chain((1..n).map(|_| disc(&mut rng, 1.0))).collect()
                }
            };
            ChartPoint::new(coords).expect("sampled coordinates are finite")
        })
        .collect()
}

/// A smooth factor `f` with `|f| ≤ 1`, drawn from `seed`, in the field DSL.
pub fn seeded_factor(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let var = |rng: &mut ChaCha8Rng| {
        let k = rng.random_range(1..=n);
        if rng.random::<bool>() {
            format!("x{k}")
        } else {
            format!("y{k}")
        }
    };
    let a1: f64 = rng.random_range(0.1..0.5);
    let a2: f64 = rng.random_range(0.1..0.45);
    let (b1, c1, b2, c2): (f64, f64, f64, f64) =
        (rng.random_range(0.3..1.5), rng.random_range(-1.0..1.0), rng.random_range(0.3..1.5), rng.random_range(-1.0..1.0));
    let (v1, v2, v3, v4) = (var(&mut rng), var(&mut rng), var(&mut rng), var(&mut rng));
    format!("{a1:.3}*sin({b1:.3}*{v1} + {c1:.3}*{v2}) + {a2:.3}*cos({b2:.3}*{v3} - {c2:.3}*{v4})")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_points_in_range() {
        for n in [2, 3] {
            let pts = sample_points(Region::Annulus { inner: 0.6, outer: 1.4 }, n, 200, 3);
            assert!(pts.iter().all(|p| p.dim() == n && (0.6..=1.4).contains(&p.norm())));
        }
    }

    #[test]
    fn deterministic() {
        let r = Region::Strip { im_lo: 0.5, im_hi: 2.0 };
        assert_eq!(sample_points(r, 2, 10, 9), sample_points(r, 2, 10, 9));
        assert_ne!(sample_points(r, 2, 10, 9), sample_points(r, 2, 10, 10));
        assert!(sample_points(r, 2, 50, 1).iter().all(|p| (0.5..=2.0).contains(&p.z(0).im)));
    }

    #[test]
    fn factors_parse_and_stay_bounded() {
        for s in 0..20 {
            let f: lcricci_core::dsl::FieldExpr = seeded_factor(2, s).parse().unwrap();
            for p in sample_points(Region::Polydisc { radius: 3.0 }, 2, 20, s) {
                assert!(f.eval(&p).unwrap().abs() <= 1.0);
            }
        }
        assert_eq!(seeded_factor(3, 5), seeded_factor(3, 5));
    }
}
