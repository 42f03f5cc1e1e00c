//! Robin eigenvalues with `β < 0` on sawtooth perturbations of the unit
//! disk: bounded Hausdorff distance, growing perimeter, and `λ₁` without a
//! lower bound.

use std::f64::consts::PI;

use serde::Serialize;

use crate::eigen::{self, BoundaryCondition, SolveOptions};
use crate::error::{invalid, Result};
use crate::geometry::{distance, MetricKind, RadialDomain, Shape};
use crate::mesh::{self, MeshParams};

/// `η(θ) = 1 + A·tri(mθ)` with the triangle wave `tri` taking values in
/// `[0, 1]`; the teeth point outward, so the disk is contained and the
/// Hausdorff distance to it is `A` on the sampled polygon.
pub fn sawtooth(amplitude: f64, teeth: usize, n: usize) -> Result<RadialDomain> {
    if teeth == 0 || n % teeth != 0 || n / teeth < 2 {
        return Err(invalid(format!("{teeth} teeth do not divide {n} samples into whole teeth")));
    }
    RadialDomain::interpolating(&sawtooth_samples(amplitude, teeth, n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SawtoothLevel {
    pub teeth: usize,
    /// Perimeter of the meshed boundary polygon.
    pub perimeter: f64,
    pub hausdorff: f64,
    pub lambda: f64,
    pub mesh_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeBetaReport {
    pub beta: f64,
    pub amplitude: f64,
    pub levels: Vec<SawtoothLevel>,
    pub strictly_decreasing: bool,
}

/// Solve `λ₁` with Robin parameter `beta` on sawtooth domains with the
/// given tooth counts. All domains share the mesh topology, whose boundary
/// vertices sit on the samples.
pub fn negative_beta_demo(beta: f64, amplitude: f64, teeth: &[usize], rings: usize) -> Result<NegativeBetaReport> {
    let n = RadialDomain::DEFAULT_SAMPLES;
    let params = MeshParams { rings, boundary: n };
    let ball: Shape = RadialDomain::ball(1.0, n)?.into();
    let mut levels = Vec::new();
    for &m in teeth {
        let d = sawtooth(amplitude, m, n)?;
        let mesh = mesh::build(&d, params)?;
        let perimeter: f64 = mesh
            .boundary_edges
            .iter()
            .map(|e| {
                let (p, q) = (mesh.vertices[e.a], mesh.vertices[e.b]);
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .sum();
        let e = eigen::solve(&mesh, BoundaryCondition::Robin(beta), SolveOptions::default())?;
        levels.push(SawtoothLevel {
            teeth: m,
            perimeter,
            hausdorff: distance(&d.clone().into(), &ball, &MetricKind::HausdorffCompact)?,
            lambda: e.lambda1,
            mesh_h: mesh.h_max,
        });
    }
    let strictly_decreasing = levels.windows(2).all(|w| w[1].lambda < w[0].lambda);
    Ok(NegativeBetaReport { beta, amplitude, levels, strictly_decreasing })
}

/// Perimeter of the polygon through the `n` sawtooth samples.
pub fn sawtooth_polygon_perimeter(amplitude: f64, teeth: usize, n: usize) -> f64 {
    let dt = 2.0 * PI / n as f64;
    let s = sawtooth_samples(amplitude, teeth, n);
    (0..n)
        .map(|i| {
            let (a, b) = (s[i], s[(i + 1) % n]);
            (a * a + b * b - 2.0 * a * b * dt.cos()).sqrt()
        })
        .sum()
}

fn sawtooth_samples(amplitude: f64, teeth: usize, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = (teeth * i % n) as f64 / n as f64;
            1.0 + amplitude * (2.0 * x - 1.0).abs()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sawtooth_samples_span_the_amplitude() {
        let d = sawtooth(0.1, 8, 256).unwrap();
        let s = d.samples();
        assert!((s.iter().copied().fold(f64::INFINITY, f64::min) - 1.0).abs() < 1e-12);
        assert!((s.iter().copied().fold(0.0, f64::max) - 1.1).abs() < 1e-12);
        assert!(sawtooth(0.1, 3, 256).is_err());
    }

    #[test]
    fn perimeter_grows_and_lambda_drops() {
        let rep = negative_beta_demo(-1.0, 0.1, &[4, 8, 16, 32], 24).unwrap();
        for w in rep.levels.windows(2) {
            assert!(w[1].perimeter > w[0].perimeter);
        }
        for l in &rep.levels {
            let p = sawtooth_polygon_perimeter(0.1, l.teeth, 256);
            assert!((l.perimeter - p).abs() < 1e-9 * p);
        }
        assert!(rep.strictly_decreasing, "{:?}", rep.levels);
    }
}
