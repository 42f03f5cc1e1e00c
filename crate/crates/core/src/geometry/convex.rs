use std::f64::consts::PI;

use super::fourier;
use super::radial::RadialDomain;
use crate::error::{invalid, Error, Result};

/// Planar convex body through its support function `ρ(θ) = max_{y∈K} <y, u(θ)>`
/// sampled at `N` uniform directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    support: Vec<f64>,
}

impl ConvexBody {
    pub const MIN_SAMPLES: usize = 64;

    /// Validates sampling and the discrete sublinearity certificate
    /// `ρ_{i-1} + ρ_{i+1} >= 2 ρ_i cos(2π/N)`.
    pub fn new(support: Vec<f64>) -> Result<Self> {
        let n = support.len();
        if n < Self::MIN_SAMPLES || n % 2 != 0 {
            return Err(invalid(format!(
                "support needs an even sample count >= {}, got {n}",
                Self::MIN_SAMPLES
            )));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(invalid("non-finite support sample"));
        }
        let body = Self { support };
        let defect = body.convexity_defect();
        if defect < -body.convexity_tolerance() {
            return Err(invalid(format!("support samples are not sublinear (defect {defect:.3e})")));
        }
        Ok(body)
    }

    pub(crate) fn convexity_tolerance(&self) -> f64 {
        1e-10 * self.support.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
    }

    /// Smallest `ρ_{i-1} + ρ_{i+1} - 2ρ_i cos(2π/N)`; negative means not convex.
    pub fn convexity_defect(&self) -> f64 {
        let n = self.support.len();
        let c = (2.0 * PI / n as f64).cos();
        (0..n)
            .map(|i| {
                self.support[(i + n - 1) % n] + self.support[(i + 1) % n] - 2.0 * c * self.support[i]
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn ball(center: [f64; 2], radius: f64, n: usize) -> Result<Self> {
        let s = fourier::uniform_angles(n)
            .into_iter()
            .map(|t| radius + center[0] * t.cos() + center[1] * t.sin())
            .collect();
        Self::new(s)
    }

    /// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y).
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        let s = fourier::uniform_angles(n)
            .into_iter()
            .map(|t| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt())
            .collect();
        Self::new(s)
    }

    /// Support function of the convex hull of `points`.
    pub fn from_polygon(points: &[[f64; 2]], n: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("empty vertex list"));
        }
        let s = fourier::uniform_angles(n)
            .into_iter()
            .map(|t| {
                let (sn, cs) = t.sin_cos();
                points
                    .iter()
                    .map(|p| p[0] * cs + p[1] * sn)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        Self::new(s)
    }

    /// Square `[-h, h]²`.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::from_polygon(&[[-half, -half], [half, -half], [half, half], [-half, half]], n)
    }

    /// Square with vertices on the axes at distance `half·√2`.
    pub fn rotated_square(half: f64, n: usize) -> Result<Self> {
        let r = half * 2f64.sqrt();
        Self::from_polygon(&[[r, 0.0], [0.0, r], [-r, 0.0], [0.0, -r]], n)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn n_samples(&self) -> usize {
        self.support.len()
    }

    pub fn min_support(&self) -> f64 {
        self.support.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_support(&self) -> f64 {
        self.support.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support of `(1-t)K0 ⊕ tK1`.
    pub fn combine(k0: &Self, k1: &Self, t: f64) -> Result<Self> {
        if k0.n_samples() != k1.n_samples() {
            return Err(invalid(format!(
                "Minkowski combination needs equal sampling ({} vs {})",
                k0.n_samples(),
                k1.n_samples()
            )));
        }
        let s = k0
            .support
            .iter()
            .zip(&k1.support)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        Self::new(s)
    }

    /// Vertices of the polygon cut out by the sampled support lines.
    ///
    /// Vertex `i` is the intersection of lines `i` and `i+1`; for bodies
    /// whose facet normals are sample directions this is the body itself.
    pub fn outer_polygon(&self) -> Vec<[f64; 2]> {
        let n = self.n_samples();
        let d = 2.0 * PI / n as f64;
        let sd = d.sin();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let (si, ci) = (d * i as f64).sin_cos();
                let (sj, cj) = (d * (i + 1) as f64).sin_cos();
                let (ri, rj) = (self.support[i], self.support[j]);
                [(ri * sj - rj * si) / sd, (rj * ci - ri * cj) / sd]
            })
            .collect()
    }

    /// Area of the support-line polygon (exact for aligned polygons, `O(N⁻²)` otherwise).
    pub fn area(&self) -> f64 {
        shoelace(&self.outer_polygon())
    }

    /// `∮ρ dθ` (Cauchy's formula in the plane).
    pub fn perimeter(&self) -> f64 {
        2.0 * PI / self.n_samples() as f64 * self.support.iter().sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.support.iter().map(|x| x * factor).collect())
    }

    pub fn rescale_to_area(&self, target: f64) -> Result<Self> {
        if !(target > 0.0) {
            return Err(invalid(format!("target area {target} must be positive")));
        }
        self.scaled((target / self.area()).sqrt())
    }

    /// Polar radius of the body at the sample angles, as an interpolating
    /// radial domain.
    ///
    /// Uses `η(φ) = min_{i : cos(φ-θ_i) > 0} ρ_i / cos(φ-θ_i)` over the support
    /// half-planes, which needs the origin strictly inside.
    pub fn to_radial(&self) -> Result<RadialDomain> {
        let n = self.n_samples();
        let min = self.min_support();
        if !(min > 0.0) {
            return Err(Error::OriginNotInterior(min));
        }
        let step = 2.0 * PI / n as f64;
        // cos of index offsets 0..n/4 (beyond a quarter turn the half-plane does not bound the ray)
        let quarter = n / 4;
        let cosines: Vec<f64> = (0..=quarter).map(|m| (step * m as f64).cos()).collect();
        let samples: Vec<f64> = (0..n)
            .map(|j| {
                let mut best = f64::INFINITY;
                for (m, &c) in cosines.iter().enumerate() {
                    if c <= 1e-12 {
                        continue;
                    }
                    let a = self.support[(j + m) % n] / c;
                    let b = self.support[(j + n - m) % n] / c;
                    best = best.min(a).min(b);
                }
                best
            })
            .collect();
        RadialDomain::interpolating(&samples)
    }

    /// Fourier coefficients of the support samples with `k` modes.
    pub fn support_fourier(&self, k: usize) -> Vec<f64> {
        fourier::analyze(&self.support, k)
    }
}

pub(crate) fn shoelace(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    0.5 * (0..n)
        .map(|i| {
            let a = p[i];
            let b = p[(i + 1) % n];
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_polygon_support_is_radius() {
        let pts: Vec<[f64; 2]> = (0..256)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 256.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let k = ConvexBody::from_polygon(&pts, 256).unwrap();
        let bound = 1.0 - (PI / 256.0).cos();
        assert!(k.support().iter().all(|r| (r - 1.0).abs() <= bound + 1e-15));
    }

    #[test]
    fn square_support_vertex_max_oracle() {
        let k = ConvexBody::square(1.0, 256).unwrap();
        for (i, r) in k.support().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 256.0;
            assert!((r - (t.cos().abs() + t.sin().abs())).abs() < 1e-14);
        }
        assert!((k.area() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn point_support_is_linear() {
        let k = ConvexBody::from_polygon(&[[1.0, 0.0]; 3], 64).unwrap();
        for (i, r) in k.support().iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 64.0;
            assert!((r - t.cos()).abs() < 1e-15);
        }
        assert!(matches!(k.to_radial(), Err(Error::OriginNotInterior(_))));
        assert!(ConvexBody::from_polygon(&[], 64).is_err());
    }

    #[test]
    fn minkowski_of_balls_is_ball() {
        let a = ConvexBody::ball([0.1, 0.0], 1.0, 128).unwrap();
        let b = ConvexBody::ball([0.0, -0.2], 2.0, 128).unwrap();
        let t = 0.3;
        let c = ConvexBody::combine(&a, &b, t).unwrap();
        let expect = ConvexBody::ball([0.7 * 0.1, -0.3 * 0.2], 0.7 + 0.6, 128).unwrap();
        for (x, y) in c.support().iter().zip(expect.support()) {
            assert!((x - y).abs() < 1e-14);
        }
        let same = ConvexBody::combine(&a, &a, 0.5).unwrap();
        assert_eq!(same.n_samples(), 128);
        assert!(ConvexBody::combine(&a, &ConvexBody::ball([0.0; 2], 1.0, 64).unwrap(), 0.5).is_err());
    }

    #[test]
    fn square_to_radial_corner_geometry() {
        let k = ConvexBody::square(1.0, 256).unwrap();
        let r = k.to_radial().unwrap();
        assert!((r.samples()[0] - 1.0).abs() < 1e-14);
        assert!((r.samples()[32] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ellipse_to_radial_matches_implicit_curve() {
        let (a, b) = (2.0, 1.0);
        let k = ConvexBody::ellipse(a, b, 256).unwrap();
        let r = k.to_radial().unwrap();
        for (j, eta) in r.samples().iter().enumerate() {
            let p = 2.0 * PI * j as f64 / 256.0;
            let exact = a * b / (b * b * p.cos().powi(2) + a * a * p.sin().powi(2)).sqrt();
            assert!((eta - exact).abs() < 2e-3 * exact, "{j}: {eta} vs {exact}");
        }
    }

    #[test]
    fn rejects_non_convex_support() {
        let mut s = vec![1.0; 64];
        s[10] = 1.2;
        assert!(ConvexBody::new(s).is_err());
        assert!(ConvexBody::new(vec![1.0; 32]).is_err());
    }
}
