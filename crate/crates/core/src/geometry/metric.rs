use std::f64::consts::{FRAC_PI_2, PI};

use super::fourier;
use super::{RadialDomain, Shape};
use crate::error::{invalid, Error, Result};

/// The shape metrics supported by [`distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    /// Hausdorff distance of the closed sets.
    HausdorffCompact,
    /// Hausdorff distance of the complements inside the container ball.
    HausdorffOpen { container: f64 },
    /// `L¹` distance of characteristic functions (area of the symmetric difference).
    Char { container: f64 },
    /// `L^p(S¹)` distance of support functions; `p = ∞` allowed.
    LpSupport { p: f64 },
    /// `W^{1,2}(S¹)` distance of radial functions.
    SobolevRadial,
}

impl MetricKind {
    pub fn name(&self) -> String {
        match self {
            MetricKind::HausdorffCompact => "hausdorff".into(),
            MetricKind::HausdorffOpen { .. } => "hausdorff-open".into(),
            MetricKind::Char { .. } => "char".into(),
            MetricKind::LpSupport { p } if p.is_infinite() => "linf".into(),
            MetricKind::LpSupport { p } => format!("l{p}"),
            MetricKind::SobolevRadial => "sobolev".into(),
        }
    }

    fn container(&self) -> Option<f64> {
        match *self {
            MetricKind::HausdorffOpen { container } | MetricKind::Char { container } => Some(container),
            _ => None,
        }
    }
}

pub fn distance(a: &Shape, b: &Shape, metric: &MetricKind) -> Result<f64> {
    if let Some(r) = metric.container() {
        for s in [a, b] {
            if s.max_radius() > r * (1.0 + 1e-12) {
                return Err(Error::OutsideContainer(r));
            }
        }
    }
    match (metric, a, b) {
        (MetricKind::LpSupport { p }, Shape::Convex(x), Shape::Convex(y)) => {
            if x.n_samples() != y.n_samples() {
                return Err(invalid("support samplings differ"));
            }
            Ok(lp_norm(x.support().iter().zip(y.support()).map(|(u, v)| u - v), x.n_samples(), *p))
        }
        (MetricKind::SobolevRadial, Shape::Radial(x), Shape::Radial(y)) => Ok(sobolev(x, y)),
        (MetricKind::LpSupport { .. }, ..) | (MetricKind::SobolevRadial, ..) => Err(Error::MetricMismatch {
            metric: metric.name(),
            shapes: format!("({}, {})", a.kind_name(), b.kind_name()),
        }),
        (MetricKind::HausdorffCompact, Shape::Convex(x), Shape::Convex(y)) if x.n_samples() == y.n_samples() => {
            Ok(lp_norm(x.support().iter().zip(y.support()).map(|(u, v)| u - v), x.n_samples(), f64::INFINITY))
        }
        (MetricKind::HausdorffCompact, ..) => {
            let (pa, pb) = dense_pair(a, b)?;
            Ok(one_sided_compact(&pa, &pb).max(one_sided_compact(&pb, &pa)))
        }
        (MetricKind::HausdorffOpen { .. }, ..) => {
            let (pa, pb) = dense_pair(a, b)?;
            let step = pa.len() / a.to_radial()?.n_samples().max(b.to_radial()?.n_samples());
            Ok(one_sided_open(&pa, &pb, step.max(1)).max(one_sided_open(&pb, &pa, step.max(1))))
        }
        (MetricKind::Char { .. }, ..) => {
            let (ra, rb) = (a.to_radial()?, b.to_radial()?);
            let n = ra.n_samples().max(rb.n_samples());
            let sa = resample(&ra, n);
            let sb = resample(&rb, n);
            Ok(0.5 * (2.0 * PI / n as f64) * sa.iter().zip(&sb).map(|(x, y)| (x * x - y * y).abs()).sum::<f64>())
        }
    }
}

fn lp_norm(diff: impl Iterator<Item = f64>, n: usize, p: f64) -> f64 {
    let w = 2.0 * PI / n as f64;
    if p.is_infinite() {
        diff.map(f64::abs).fold(0.0, f64::max)
    } else if p == 2.0 {
        (w * diff.map(|d| d * d).sum::<f64>()).sqrt()
    } else {
        (w * diff.map(|d| d.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

fn sobolev(x: &RadialDomain, y: &RadialDomain) -> f64 {
    let k = x.modes().max(y.modes());
    let cx = fourier::resize(x.fourier(), k);
    let cy = fourier::resize(y.fourier(), k);
    let mut s = 2.0 * PI * (cx[0] - cy[0]).powi(2);
    for m in 1..=k {
        let w = PI * (1.0 + (m * m) as f64);
        s += w * ((cx[m] - cy[m]).powi(2) + (cx[k + m] - cy[k + m]).powi(2));
    }
    s.sqrt()
}

/// Radii at `n` uniform angles. Interpolating domains (`K = N/2`, e.g. from
/// convex bodies) are refined along the chords of their sample polygon so
/// that corners do not ring.
fn resample(r: &RadialDomain, n: usize) -> Vec<f64> {
    let base = r.n_samples();
    if base == n {
        return r.samples().to_vec();
    }
    if 2 * r.modes() == base && n % base == 0 {
        let f = n / base;
        let s = r.samples();
        let d = 2.0 * PI / base as f64;
        return (0..n)
            .map(|j| {
                let (i, o) = (j / f, j % f);
                if o == 0 {
                    return s[i];
                }
                let (a, b) = (s[i], s[(i + 1) % base]);
                let t = d * o as f64 / f as f64;
                a * b * d.sin() / (a * t.sin() + b * (d - t).sin())
            })
            .collect();
    }
    (0..n).map(|i| r.radius(2.0 * PI * i as f64 / n as f64)).collect()
}

/// Boundary radii of both shapes on a common grid of `4 max(N)` rays.
fn dense_pair(a: &Shape, b: &Shape) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ra, rb) = (a.to_radial()?, b.to_radial()?);
    let m = 4 * ra.n_samples().max(rb.n_samples());
    Ok((resample(&ra, m), resample(&rb, m)))
}

/// Distance from `p` (at ray index `j`, radius `rp`) to the closed polyline
/// through `r[k] u(φ_k)`, scanning outward in angle with a sector bound.
fn polyline_distance(r: &[f64], j: usize, rp: f64, mut best: f64) -> f64 {
    let m = r.len();
    let step = 2.0 * PI / m as f64;
    let (sp, cp) = (step * j as f64).sin_cos();
    let p = [rp * cp, rp * sp];
    let point = |k: usize| {
        let k = k % m;
        let (s, c) = (step * k as f64).sin_cos();
        [r[k] * c, r[k] * s]
    };
    for o in 0..m / 2 {
        let gap = step * o as f64;
        if rp * gap.min(FRAC_PI_2).sin() >= best {
            break;
        }
        let fwd = segment_distance(p, point(j + o), point(j + o + 1));
        let bwd = segment_distance(p, point(j + m - o - 1), point(j + m - o));
        best = best.min(fwd).min(bwd);
    }
    best
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

/// `sup_{a ∈ A} d(a, B)`; for sets star-shaped about a common center the
/// supremum is attained on `∂A`.
fn one_sided_compact(ra: &[f64], rb: &[f64]) -> f64 {
    (0..ra.len())
        .filter(|&j| ra[j] > rb[j])
        .map(|j| polyline_distance(rb, j, ra[j], ra[j] - rb[j]))
        .fold(0.0, f64::max)
}

/// `sup_{x ∈ B \ A} d(x, ∂B)`, sampled along every `stride`-th ray.
fn one_sided_open(ra: &[f64], rb: &[f64], stride: usize) -> f64 {
    let m = ra.len();
    let rmax = rb.iter().copied().fold(0.0, f64::max);
    let spacing = 2.0 * PI * rmax / m as f64;
    let mut sup = 0.0_f64;
    for j in (0..m).step_by(stride) {
        if rb[j] <= ra[j] {
            continue;
        }
        let len = rb[j] - ra[j];
        let count = (len / spacing).ceil() as usize;
        for s in 0..=count {
            let r = ra[j] + len * s as f64 / count.max(1) as f64;
            let d = polyline_distance(rb, j, r, rb[j] - r);
            sup = sup.max(d);
        }
    }
    sup
}

/// Area of the symmetric difference by rasterizing `[-R, R]²` on a
/// `grid × grid` lattice of pixel centers.
pub fn char_distance_raster(a: &Shape, b: &Shape, container: f64, grid: usize) -> Result<f64> {
    let (ra, rb) = (a.to_radial()?, b.to_radial()?);
    let h = 2.0 * container / grid as f64;
    let mut count = 0usize;
    for iy in 0..grid {
        let y = -container + (iy as f64 + 0.5) * h;
        for ix in 0..grid {
            let x = -container + (ix as f64 + 0.5) * h;
            let r = x.hypot(y);
            if r > container {
                continue;
            }
            let t = y.atan2(x);
            let ina = r < ra.radius(t);
            let inb = r < rb.radius(t);
            if ina != inb {
                count += 1;
            }
        }
    }
    Ok(count as f64 * h * h)
}

#[cfg(test)]
mod tests {
    use super::super::ConvexBody;
    use super::*;

    fn ball(r: f64) -> Shape {
        Shape::Radial(RadialDomain::ball(r, 256).unwrap())
    }

    #[test]
    fn nested_ball_distances() {
        let (b1, b2) = (ball(1.0), ball(2.0));
        let h = distance(&b1, &b2, &MetricKind::HausdorffCompact).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        let ho = distance(&b1, &b2, &MetricKind::HausdorffOpen { container: 3.0 }).unwrap();
        // interior points see the inscribed 1024-gon of the outer circle
        let sag = 2.0 * (1.0 - (PI / 1024.0).cos());
        assert!(ho <= 1.0 && 1.0 - ho <= sag + 1e-12, "{ho}");
        let c = distance(&b1, &b2, &MetricKind::Char { container: 3.0 }).unwrap();
        assert!((c - 3.0 * PI).abs() < 1e-12);
        assert_eq!(distance(&b1, &b1, &MetricKind::Char { container: 3.0 }).unwrap(), 0.0);
    }

    #[test]
    fn support_l2_of_unit_offset() {
        let k1 = Shape::Convex(ConvexBody::ball([0.0; 2], 1.0, 256).unwrap());
        let k2 = Shape::Convex(ConvexBody::ball([0.0; 2], 2.0, 256).unwrap());
        let d = distance(&k1, &k2, &MetricKind::LpSupport { p: 2.0 }).unwrap();
        assert!((d - (2.0 * PI).sqrt()).abs() < 1e-12);
        let dinf = distance(&k1, &k2, &MetricKind::LpSupport { p: f64::INFINITY }).unwrap();
        assert!((dinf - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sobolev_of_first_mode() {
        let mut c = vec![0.0; 65];
        c[0] = 1.0;
        let a = Shape::Radial(RadialDomain::from_fourier(c.clone(), 256).unwrap());
        c[1] = 0.1;
        let b = Shape::Radial(RadialDomain::from_fourier(c, 256).unwrap());
        let d = distance(&a, &b, &MetricKind::SobolevRadial).unwrap();
        assert!((d - 0.1 * (2.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mismatched_metrics_are_rejected() {
        let k = Shape::Convex(ConvexBody::ball([0.0; 2], 1.0, 256).unwrap());
        let r = ball(1.0);
        assert!(matches!(
            distance(&r, &r, &MetricKind::LpSupport { p: 2.0 }),
            Err(Error::MetricMismatch { .. })
        ));
        assert!(matches!(distance(&k, &k, &MetricKind::SobolevRadial), Err(Error::MetricMismatch { .. })));
        assert!(matches!(
            distance(&r, &ball(2.0), &MetricKind::Char { container: 1.5 }),
            Err(Error::OutsideContainer(_))
        ));
    }

    #[test]
    fn char_formula_agrees_with_rasterization() {
        let mut c = vec![0.0; 65];
        c[0] = 1.0;
        c[3] = 0.2;
        let a = Shape::Radial(RadialDomain::from_fourier(c, 256).unwrap());
        let b = Shape::Convex(ConvexBody::square(0.9, 256).unwrap());
        let exact = distance(&a, &b, &MetricKind::Char { container: 2.0 }).unwrap();
        let raster = char_distance_raster(&a, &b, 2.0, 1024).unwrap();
        assert!((exact - raster).abs() < 5e-3 * exact.max(1.0), "{exact} vs {raster}");
    }

    #[test]
    fn hausdorff_of_shifted_square_profile() {
        // square [-1,1]² vs the unit disk: farthest corner sits at √2 - 1
        let sq = Shape::Convex(ConvexBody::square(1.0, 256).unwrap());
        let d = distance(&sq, &ball(1.0), &MetricKind::HausdorffCompact).unwrap();
        assert!((d - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }
}
