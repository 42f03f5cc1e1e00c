use std::f64::consts::PI;

use super::fourier;
use crate::error::{invalid, Result};

/// Star-shaped domain `{ r u(θ) : 0 <= r < η(θ) }` about the origin.
///
/// `η` is a trigonometric polynomial; `samples` holds its values at the
/// `N` uniform angles `2πi/N` and always equals the synthesis of `fourier`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDomain {
    fourier: Vec<f64>,
    samples: Vec<f64>,
}

impl RadialDomain {
    pub const DEFAULT_SAMPLES: usize = 256;
    pub const DEFAULT_MODES: usize = 32;

    /// Build from coefficients `[a0, a1..aK, b1..bK]` sampled at `n` angles.
    pub fn from_fourier(fourier: Vec<f64>, n: usize) -> Result<Self> {
        check_layout(&fourier, n)?;
        let samples = fourier::synthesize(&fourier, n);
        Self::checked(fourier, samples)
    }

    /// Project samples onto `k` modes; `k == n/2` keeps them exactly.
    pub fn from_samples(samples: &[f64], k: usize) -> Result<Self> {
        let n = samples.len();
        if 2 * k > n {
            return Err(invalid(format!("{k} modes exceed the Nyquist limit of {n} samples")));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(invalid("non-finite radius sample"));
        }
        let fourier = fourier::analyze(samples, k);
        Self::from_fourier(fourier, n)
    }

    /// Trigonometric interpolant through the samples.
    pub fn interpolating(samples: &[f64]) -> Result<Self> {
        Self::from_samples(samples, samples.len() / 2)
    }

    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize, k: usize) -> Result<Self> {
        let samples: Vec<f64> = fourier::uniform_angles(n).into_iter().map(f).collect();
        Self::from_samples(&samples, k)
    }

    pub fn ball(radius: f64, n: usize) -> Result<Self> {
        let mut c = vec![0.0; 2 * Self::DEFAULT_MODES.min(n / 2) + 1];
        c[0] = radius;
        Self::from_fourier(c, n)
    }

    /// `r0 (1 + amplitude cos(mode θ))` with default sampling.
    pub fn perturbed_ball(r0: f64, mode: usize, amplitude: f64) -> Result<Self> {
        let n = Self::DEFAULT_SAMPLES;
        let k = Self::DEFAULT_MODES.max(mode);
        let mut c = vec![0.0; 2 * k + 1];
        c[0] = r0;
        if mode == 0 {
            c[0] += r0 * amplitude;
        } else {
            c[mode] = r0 * amplitude;
        }
        Self::from_fourier(c, n)
    }

    /// Reassemble from stored parts, e.g. after deserialization.
    pub fn from_parts(fourier: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        check_layout(&fourier, samples.len())?;
        let synth = fourier::synthesize(&fourier, samples.len());
        let scale = samples.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let err = synth
            .iter()
            .zip(&samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if err > 1e-9 * scale {
            return Err(invalid(format!("samples disagree with Fourier synthesis by {err:.3e}")));
        }
        Self::checked(fourier, samples)
    }

    fn checked(fourier: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        if let Some((i, r)) = samples.iter().enumerate().find(|(_, r)| !(**r > 0.0)) {
            return Err(invalid(format!("radius sample {i} is {r}; domain is not star-shaped")));
        }
        Ok(Self { fourier, samples })
    }

    pub fn fourier(&self) -> &[f64] {
        &self.fourier
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn modes(&self) -> usize {
        fourier::modes_of(&self.fourier)
    }

    pub fn angle(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.samples.len() as f64
    }

    pub fn radius(&self, theta: f64) -> f64 {
        fourier::eval(&self.fourier, theta)
    }

    /// `(η, η', η'')` at `theta`.
    pub fn radius_derivs(&self, theta: f64) -> (f64, f64, f64) {
        fourier::eval3(&self.fourier, theta)
    }

    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        let r = self.radius(theta);
        [r * theta.cos(), r * theta.sin()]
    }

    pub fn derivative_samples(&self) -> Vec<f64> {
        fourier::derivative_samples(&self.fourier, self.n_samples(), 1)
    }

    pub fn second_derivative_samples(&self) -> Vec<f64> {
        fourier::derivative_samples(&self.fourier, self.n_samples(), 2)
    }

    pub fn min_radius(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean_radius(&self) -> f64 {
        self.fourier[0]
    }

    /// `½∮η² dθ`, trapezoid rule on the samples.
    pub fn area(&self) -> f64 {
        let n = self.n_samples() as f64;
        0.5 * (2.0 * PI / n) * self.samples.iter().map(|r| r * r).sum::<f64>()
    }

    /// `∮ sqrt(η² + η'²) dθ`.
    pub fn perimeter(&self) -> f64 {
        let n = self.n_samples() as f64;
        let d = self.derivative_samples();
        (2.0 * PI / n)
            * self
                .samples
                .iter()
                .zip(&d)
                .map(|(r, dr)| r.hypot(*dr))
                .sum::<f64>()
    }

    /// Signed curvature of the boundary at `theta`.
    pub fn curvature(&self, theta: f64) -> f64 {
        let (r, d1, d2) = self.radius_derivs(theta);
        polar_curvature(r, d1, d2)
    }

    pub fn curvature_samples(&self) -> Vec<f64> {
        let d1 = self.derivative_samples();
        let d2 = self.second_derivative_samples();
        self.samples
            .iter()
            .zip(d1.iter().zip(&d2))
            .map(|(&r, (&a, &b))| polar_curvature(r, a, b))
            .collect()
    }

    /// Discrete `C²` surrogate `(max|η|, max|Dη|, max|D²η|)` from divided differences.
    pub fn c2_surrogate(&self) -> (f64, f64, f64) {
        let n = self.n_samples();
        let dt = 2.0 * PI / n as f64;
        let s = &self.samples;
        let mut m0 = 0.0_f64;
        let mut m1 = 0.0_f64;
        let mut m2 = 0.0_f64;
        for i in 0..n {
            let prev = s[(i + n - 1) % n];
            let next = s[(i + 1) % n];
            m0 = m0.max(s[i].abs());
            m1 = m1.max(((next - prev) / (2.0 * dt)).abs());
            m2 = m2.max(((next - 2.0 * s[i] + prev) / (dt * dt)).abs());
        }
        (m0, m1, m2)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let c = self.fourier.iter().map(|x| x * factor).collect();
        let s = self.samples.iter().map(|x| x * factor).collect();
        Self::checked(c, s)
    }

    /// Scale about the origin so that `area() == target`.
    pub fn rescale_to_area(&self, target: f64) -> Result<Self> {
        if !(target > 0.0) {
            return Err(invalid(format!("target area {target} must be positive")));
        }
        self.scaled((target / self.area()).sqrt())
    }

    /// Same domain with `k` modes (zero padding only; truncation is refused).
    pub fn with_modes(&self, k: usize) -> Result<Self> {
        if k < self.modes() {
            return Err(invalid("refusing to truncate modes"));
        }
        check_layout(&fourier::resize(&self.fourier, k), self.n_samples())?;
        Ok(Self {
            fourier: fourier::resize(&self.fourier, k),
            samples: self.samples.clone(),
        })
    }

    /// `Ω((1-t)η0 + tη1)`, coefficient- and samplewise.
    pub fn interpolate(a: &Self, b: &Self, t: f64) -> Result<Self> {
        if a.n_samples() != b.n_samples() || a.modes() != b.modes() {
            return Err(invalid(format!(
                "interpolation needs equal sampling: (N={}, K={}) vs (N={}, K={})",
                a.n_samples(),
                a.modes(),
                b.n_samples(),
                b.modes()
            )));
        }
        let mix = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(p, q)| (1.0 - t) * p + t * q).collect()
        };
        Self::checked(mix(&a.fourier, &b.fourier), mix(&a.samples, &b.samples))
    }

    /// Add `offset` (given at this domain's sample angles) to η.
    ///
    /// The offset is interpolated at full resolution so the result carries
    /// `N/2` modes.
    pub fn displaced(&self, offset: &[f64]) -> Result<Self> {
        if offset.len() != self.n_samples() {
            return Err(invalid("offset sampling differs from domain sampling"));
        }
        let k = self.n_samples() / 2;
        let mut c = fourier::resize(&self.fourier, k);
        let d = fourier::analyze(offset, k);
        for (x, y) in c.iter_mut().zip(&d) {
            *x += y;
        }
        Self::from_fourier(c, self.n_samples())
    }

    /// Largest deviation between stored samples and Fourier synthesis.
    pub fn consistency_error(&self) -> f64 {
        fourier::synthesize(&self.fourier, self.n_samples())
            .iter()
            .zip(&self.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_layout(fourier: &[f64], n: usize) -> Result<()> {
    if fourier.is_empty() || fourier.len() % 2 == 0 {
        return Err(invalid(format!("Fourier vector length {} must be odd", fourier.len())));
    }
    if n < 8 || n % 2 != 0 {
        return Err(invalid(format!("sample count {n} must be even and at least 8")));
    }
    let k = fourier::modes_of(fourier);
    if 2 * k > n {
        return Err(invalid(format!("{k} modes exceed the Nyquist limit of {n} samples")));
    }
    if fourier.iter().any(|x| !x.is_finite()) {
        return Err(invalid("non-finite Fourier coefficient"));
    }
    Ok(())
}

pub(crate) fn polar_curvature(r: f64, d1: f64, d2: f64) -> f64 {
    (r * r + 2.0 * d1 * d1 - r * d2) / (r * r + d1 * d1).powf(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_mode(r0: f64, k: usize, amp: f64) -> RadialDomain {
        let mut c = vec![0.0; 2 * 32 + 1];
        c[0] = r0;
        c[k] = amp;
        RadialDomain::from_fourier(c, 256).unwrap()
    }

    #[test]
    fn ball_area_perimeter_curvature() {
        let b = RadialDomain::ball(1.5, 256).unwrap();
        assert!((b.area() - PI * 2.25).abs() < 1e-12);
        assert!((b.perimeter() - 3.0 * PI).abs() < 1e-12);
        for k in b.curvature_samples() {
            assert!((k - 1.0 / 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn area_of_mode_three_perturbation() {
        // ½∮(1 + 0.1 cos 3θ)² dθ = π(1 + 0.01/2)
        let d = cos_mode(1.0, 3, 0.1);
        assert!((d.area() - 1.005 * PI).abs() < 1e-12);
    }

    #[test]
    fn curvature_matches_symbolic_formula() {
        let d = cos_mode(1.0, 4, 0.05);
        let expected = (1.05_f64.powi(2) + 1.05 * 0.8) / 1.05_f64.powi(3);
        assert!((d.curvature_samples()[0] - expected).abs() < 1e-12);
        assert!((d.curvature(0.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn rescale_hits_target_area() {
        let d = cos_mode(1.0, 3, 0.1);
        let r = d.rescale_to_area(PI).unwrap();
        assert!((r.area() - PI).abs() < 1e-12 * PI);
        assert!((r.mean_radius() - (1.0 / 1.005_f64).sqrt()).abs() < 1e-14);
        let same = d.rescale_to_area(d.area()).unwrap();
        assert!((same.mean_radius() - 1.0).abs() < 1e-15);
        let b2 = RadialDomain::ball(2.0, 256).unwrap().rescale_to_area(PI).unwrap();
        assert!((b2.mean_radius() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_cases() {
        let a = cos_mode(1.0, 2, 0.2);
        let b = cos_mode(1.0, 2, -0.2);
        let m = RadialDomain::interpolate(&a, &b, 0.5).unwrap();
        for s in m.samples() {
            assert!((s - 1.0).abs() < 1e-14);
        }
        let one = RadialDomain::ball(1.0, 256).unwrap();
        let two = RadialDomain::ball(2.0, 256).unwrap();
        let q = RadialDomain::interpolate(&one, &two, 0.25).unwrap();
        assert!(q.samples().iter().all(|s| (s - 1.25).abs() < 1e-14));
        let same = RadialDomain::interpolate(&a, &a, 0.3).unwrap();
        assert_eq!(same.fourier().len(), a.fourier().len());
        for (x, y) in same.samples().iter().zip(a.samples()) {
            assert!((x - y).abs() < 1e-15);
        }
        let coarse = RadialDomain::from_fourier(vec![1.0, 0.0, 0.0], 256).unwrap();
        assert!(RadialDomain::interpolate(&a, &coarse, 0.5).is_err());
    }

    #[test]
    fn rejects_non_star_shaped() {
        let mut c = vec![0.0; 5];
        c[0] = 0.5;
        c[1] = 1.0;
        assert!(RadialDomain::from_fourier(c, 64).is_err());
        assert!(RadialDomain::from_fourier(vec![1.0, 0.0], 64).is_err());
    }

    #[test]
    fn samples_stay_consistent() {
        let d = RadialDomain::from_fn(|t| 1.0 + 0.1 * (t.cos()).abs(), 128, 64).unwrap();
        assert!(d.consistency_error() < 1e-12);
        let e = d.displaced(&vec![0.01; 128]).unwrap();
        assert!((e.samples()[5] - d.samples()[5] - 0.01).abs() < 1e-13);
    }
}
