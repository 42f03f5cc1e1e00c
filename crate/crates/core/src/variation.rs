//! Domain variations of the first eigenvalue: the boundary-integral first
//! variation, finite-difference probes of first and second variations,
//! α-convexity along radial interpolation, and Brunn–Minkowski checks.

use std::f64::consts::PI;

use serde::Serialize;

use crate::eigen::{self, BoundaryCondition, EigenResult, SolveOptions};
use crate::error::{invalid, Error, Result};
use crate::flow::SlackModel;
use crate::geometry::{distance, fourier, AdmissibilityConfig, ConvexBody, MetricKind, RadialDomain, Shape};
use crate::mesh::{self, MeshParams, TriMesh};
use crate::sparse::Skyline;

/// Perturbation `x ↦ x + t v + t²/2 w` given through boundary samples at the
/// domain's sample angles.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationField {
    /// `v·ν`.
    pub normal: Vec<f64>,
    /// Tangential part of `v`; carried for bookkeeping only, since it does
    /// not move the domain to first order.
    pub tangential: Option<Vec<f64>>,
    /// `w·ν` of the second-order field.
    pub second: Option<Vec<f64>>,
}

impl PerturbationField {
    pub fn normal(g: Vec<f64>) -> Self {
        Self { normal: g, tangential: None, second: None }
    }

    /// `v·ν ≡ 1`.
    pub fn dilation(n: usize) -> Self {
        Self::normal(vec![1.0; n])
    }

    /// Normal component of the constant field `v ≡ dir`.
    pub fn translation(domain: &RadialDomain, dir: [f64; 2]) -> Self {
        let d = domain.derivative_samples();
        let mut normal = Vec::with_capacity(domain.n_samples());
        let mut tangential = Vec::with_capacity(domain.n_samples());
        for (i, (&r, &dr)) in domain.samples().iter().zip(&d).enumerate() {
            let (s, c) = domain.angle(i).sin_cos();
            let j = r.hypot(dr);
            let vr = dir[0] * c + dir[1] * s;
            let vt = -dir[0] * s + dir[1] * c;
            // outward normal (η e_r - η' e_θ)/J, tangent (η' e_r + η e_θ)/J
            normal.push((r * vr - dr * vt) / j);
            tangential.push((dr * vr + r * vt) / j);
        }
        Self { normal, tangential: Some(tangential), second: None }
    }

    /// Normal field whose radial realization is the offset `psi`.
    pub fn from_radial(domain: &RadialDomain, psi: &[f64]) -> Self {
        let d = domain.derivative_samples();
        let g = domain
            .samples()
            .iter()
            .zip(&d)
            .zip(psi)
            .map(|((&r, &dr), &p)| p * r / r.hypot(dr))
            .collect();
        Self::normal(g)
    }

    pub fn with_second(mut self, w: Vec<f64>) -> Self {
        self.second = Some(w);
        self
    }

    pub fn scaled(&self, s: f64) -> Self {
        let sc = |v: &Vec<f64>| v.iter().map(|x| x * s).collect::<Vec<_>>();
        Self {
            normal: sc(&self.normal),
            tangential: self.tangential.as_ref().map(sc),
            second: self.second.as_ref().map(|w| w.iter().map(|x| x * s * s).collect()),
        }
    }

    fn check(&self, domain: &RadialDomain) -> Result<()> {
        let n = domain.n_samples();
        let ok = self.normal.len() == n
            && self.tangential.as_ref().map_or(true, |t| t.len() == n)
            && self.second.as_ref().map_or(true, |w| w.len() == n);
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("field sampling differs from the domain's {n} samples")))
        }
    }

    /// Radial offsets `ψ = g·√(η² + η'²)/η` realizing the normal parts.
    pub fn radial_offsets(&self, domain: &RadialDomain) -> (Vec<f64>, Option<Vec<f64>>) {
        let d = domain.derivative_samples();
        let factor: Vec<f64> = domain.samples().iter().zip(&d).map(|(&r, &dr)| r.hypot(dr) / r).collect();
        let realize = |g: &Vec<f64>| g.iter().zip(&factor).map(|(a, b)| a * b).collect::<Vec<_>>();
        (realize(&self.normal), self.second.as_ref().map(realize))
    }

    /// `‖v·ν‖_{W^{1,2}(∂Ω)}` with arclength `ds = √(η²+η'²) dθ`.
    pub fn w12_norm(&self, domain: &RadialDomain) -> f64 {
        let n = domain.n_samples();
        let k = n / 2;
        let gd = fourier::derivative_samples(&fourier::analyze(&self.normal, k), n, 1);
        let d = domain.derivative_samples();
        let dt = 2.0 * PI / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let j = domain.samples()[i].hypot(d[i]);
                self.normal[i].powi(2) * j + gd[i].powi(2) / j
            })
            .sum();
        (sum * dt).sqrt()
    }
}

/// Eigenfunction data on the boundary loop of one mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub lambda: f64,
    pub theta: Vec<f64>,
    /// Integrand of the first variation against `v·ν ds`.
    pub integrand: Vec<f64>,
    /// `√(η² + η'²)` at `theta`.
    pub jacobian: Vec<f64>,
}

impl BoundaryTrace {
    /// `∮ I g ds` for `g` sampled at the domain's angles.
    pub fn integrate(&self, g: &[f64]) -> f64 {
        let gb = resample(g, &self.theta);
        let dt = 2.0 * PI / self.theta.len() as f64;
        dt * (0..self.theta.len()).map(|j| self.integrand[j] * gb[j] * self.jacobian[j]).sum::<f64>()
    }
}

/// Trigonometric interpolation of uniform samples at arbitrary angles.
fn resample(values: &[f64], theta: &[f64]) -> Vec<f64> {
    let n = values.len();
    if theta.len() == n && theta.iter().enumerate().all(|(i, t)| (t - 2.0 * PI * i as f64 / n as f64).abs() < 1e-12) {
        return values.to_vec();
    }
    let c = fourier::analyze(values, n / 2);
    theta.iter().map(|&t| fourier::eval(&c, t)).collect()
}

/// Integrand of the first variation on the boundary nodes of `mesh`.
///
/// Robin: `|∇u|² - λu² - 2β²u² + βκu²` with `|∇u|² = u_s² + β²u²`
/// (tangential derivative by periodic fourth-order differences of the
/// nodal trace). Dirichlet: `-(∂_ν u)²`, with the normal derivative taken
/// as the consistent boundary flux of the discrete residual.
pub fn boundary_trace(domain: &RadialDomain, mesh: &TriMesh, eig: &EigenResult, bc: BoundaryCondition) -> Result<BoundaryTrace> {
    let nb = mesh.boundary_loop.len();
    let theta = mesh.boundary_theta.clone();
    let jacobian: Vec<f64> = theta
        .iter()
        .map(|&t| {
            let (r, d, _) = domain.radius_derivs(t);
            r.hypot(d)
        })
        .collect();
    let lambda = eig.lambda1;
    let integrand = match bc {
        BoundaryCondition::Robin(beta) => {
            let ub: Vec<f64> = mesh.boundary_loop.iter().map(|&i| eig.u[i]).collect();
            let dt = 2.0 * PI / nb as f64;
            (0..nb)
                .map(|j| {
                    let at = |o: isize| ub[(j as isize + o).rem_euclid(nb as isize) as usize];
                    let du = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * dt);
                    let us = du / jacobian[j];
                    let u = ub[j];
                    let kappa = domain.curvature(theta[j]);
                    us * us - (lambda + beta * beta) * u * u + beta * kappa * u * u
                })
                .collect()
        }
        BoundaryCondition::Dirichlet => {
            let asm = eigen::assemble(mesh)?;
            let ku = asm.stiffness.mul_vec(&eig.u);
            let mu = asm.mass.mul_vec(&eig.u);
            let rb: Vec<f64> = mesh.boundary_loop.iter().map(|&i| ku[i] - lambda * mu[i]).collect();
            let bbb = asm.boundary_mass.restrict(&mesh.boundary_loop);
            let chol = Skyline::factor(&bbb).ok_or_else(|| invalid("boundary mass matrix is singular"))?;
            chol.solve(&rb).into_iter().map(|f| -f * f).collect()
        }
    };
    Ok(BoundaryTrace { lambda, theta, integrand, jacobian })
}

/// Solver settings shared by the variation probes.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationConfig {
    pub bc: BoundaryCondition,
    /// Mesh size relative to the domain diameter.
    pub mesh_factor: f64,
    /// Finite-difference steps relative to the diameter.
    pub deltas: [f64; 2],
    pub admissibility: AdmissibilityConfig,
}

impl VariationConfig {
    pub fn new(bc: BoundaryCondition) -> Self {
        Self { bc, mesh_factor: 0.01, deltas: [1e-2, 5e-3], admissibility: AdmissibilityConfig::default() }
    }

    pub fn params(&self, domain: &RadialDomain) -> Result<MeshParams> {
        MeshParams::choose(domain, self.mesh_factor * 2.0 * domain.max_radius())
    }
}

fn solve_on(domain: &RadialDomain, params: MeshParams, bc: BoundaryCondition) -> Result<(TriMesh, EigenResult)> {
    let m = mesh::build(domain, params)?;
    let e = eigen::solve(&m, bc, SolveOptions::default())?;
    Ok((m, e))
}

/// `λ̇[Ω, v]` from the boundary integral.
pub fn first_variation(domain: &RadialDomain, field: &PerturbationField, cfg: &VariationConfig) -> Result<f64> {
    field.check(domain)?;
    let (m, e) = solve_on(domain, cfg.params(domain)?, cfg.bc)?;
    Ok(boundary_trace(domain, &m, &e, cfg.bc)?.integrate(&field.normal))
}

/// Derivatives of `λ` along radial displacement directions (samples at the
/// domain angles), all from one eigen solve.
pub fn radial_gradient(domain: &RadialDomain, bc: BoundaryCondition, params: MeshParams, directions: &[Vec<f64>]) -> Result<Vec<f64>> {
    let (m, e) = solve_on(domain, params, bc)?;
    let trace = boundary_trace(domain, &m, &e, bc)?;
    Ok(directions
        .iter()
        .map(|psi| trace.integrate(&PerturbationField::from_radial(domain, psi).normal))
        .collect())
}

/// Finite-difference derivative of `t ↦ λ(Ω_t)` of order 1 (central) or 2,
/// Richardson-extrapolated over the two configured steps.
pub fn finite_diff_variation(domain: &RadialDomain, field: &PerturbationField, cfg: &VariationConfig, order: u32) -> Result<f64> {
    field.check(domain)?;
    if order != 1 && order != 2 {
        return Err(invalid(format!("derivative order must be 1 or 2, got {order}")));
    }
    let params = cfg.params(domain)?;
    let (psi, psi_w) = field.radial_offsets(domain);
    let size = psi.iter().chain(psi_w.iter().flatten()).fold(0.0_f64, |m, x| m.max(x.abs()));
    if size == 0.0 {
        return Ok(0.0);
    }
    let diam = 2.0 * domain.max_radius();
    let lam = |t: f64| -> Result<f64> {
        let offset: Vec<f64> = (0..psi.len())
            .map(|i| t * psi[i] + psi_w.as_ref().map_or(0.0, |w| 0.5 * t * t * w[i]))
            .collect();
        let d = domain.displaced(&offset).map_err(|_| Error::AdmissibilityLost(t))?;
        if !Shape::Radial(d.clone()).is_admissible(&cfg.admissibility) {
            return Err(Error::AdmissibilityLost(t));
        }
        Ok(solve_on(&d, params, cfg.bc)?.1.lambda1)
    };
    let center = if order == 2 { solve_on(domain, params, cfg.bc)?.1.lambda1 } else { 0.0 };
    let mut est = [0.0; 2];
    for (k, rel) in cfg.deltas.iter().enumerate() {
        let delta = rel * diam / size;
        let (p, m) = (lam(delta)?, lam(-delta)?);
        est[k] = if order == 1 { (p - m) / (2.0 * delta) } else { (p - 2.0 * center + m) / (delta * delta) };
    }
    let ratio = cfg.deltas[0] / cfg.deltas[1];
    let r2 = ratio * ratio;
    Ok((r2 * est[1] - est[0]) / (r2 - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondVariationSample {
    pub second: f64,
    pub norm_sq: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondVariationReport {
    pub samples: Vec<SecondVariationSample>,
    /// Empirical constant `max |λ̈| / ‖v‖²`.
    pub max_ratio: f64,
    pub pass: bool,
}

/// `|λ̈_FD| / ‖v‖²_{W^{1,2}(∂Ω)}` over (domain, field) pairs with `w = 0`.
pub fn second_variation_bound(pairs: &[(RadialDomain, PerturbationField)], cfg: &VariationConfig) -> Result<SecondVariationReport> {
    let mut samples = Vec::new();
    for (d, f) in pairs {
        let f = PerturbationField { second: None, ..f.clone() };
        let second = finite_diff_variation(d, &f, cfg, 2)?;
        let n2 = f.w12_norm(d).powi(2);
        samples.push(SecondVariationSample { second, norm_sq: n2, ratio: second.abs() / n2 });
    }
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    Ok(SecondVariationReport { pass: max_ratio.is_finite(), max_ratio, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub second_differences: Vec<f64>,
    /// `d_𝒪(Ω₀, Ω₁)`.
    pub distance: f64,
    pub alpha_estimate: f64,
    /// `chord - (α/2)t(1-t)d² - h(t)` per grid point.
    pub margins: Vec<f64>,
    pub pass: bool,
}

/// `h(t) = λ(Ω((1-t)η₀ + tη₁))` on one mesh topology.
pub fn path_values(eta0: &RadialDomain, eta1: &RadialDomain, bc: BoundaryCondition, params: MeshParams, t: &[f64]) -> Result<Vec<f64>> {
    t.iter()
        .map(|&s| Ok(solve_on(&RadialDomain::interpolate(eta0, eta1, s)?, params, bc)?.1.lambda1))
        .collect()
}

/// Chord margins `(1-t)h₀ + t h₁ - (α/2)t(1-t)d² - h(t)`.
pub fn chord_margins(t: &[f64], values: &[f64], alpha: f64, d: f64) -> Vec<f64> {
    let (h0, h1) = (values[0], values[values.len() - 1]);
    t.iter()
        .zip(values)
        .map(|(&s, &h)| (1.0 - s) * h0 + s * h1 - 0.5 * alpha * s * (1.0 - s) * d * d - h)
        .collect()
}

/// Estimate `α` from second differences of `h` on a uniform grid over
/// `[0, 1]` and check the chord inequality with it.
pub fn alpha_convexity_check(eta0: &RadialDomain, eta1: &RadialDomain, points: usize, cfg: &VariationConfig) -> Result<ConvexityReport> {
    if cfg.bc.beta().map_or(true, |b| b <= 0.0) {
        return Err(invalid("alpha-convexity check needs a Robin condition with beta > 0"));
    }
    if points < 3 {
        return Err(invalid("need at least 3 grid points"));
    }
    let t_grid: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let params = cfg.params(eta0)?;
    let values = path_values(eta0, eta1, cfg.bc, params, &t_grid)?;
    let d = distance(&eta0.clone().into(), &eta1.clone().into(), &MetricKind::SobolevRadial)?;
    let dt = 1.0 / (points - 1) as f64;
    let second_differences: Vec<f64> = values.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / (dt * dt)).collect();
    let alpha_estimate = if d > 0.0 {
        second_differences.iter().map(|s| s / (d * d)).fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let margins = chord_margins(&t_grid, &values, alpha_estimate, d);
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pass = alpha_estimate.is_finite() && margins.iter().all(|m| *m >= -1e-9 * scale);
    Ok(ConvexityReport { t_grid, values, second_differences, distance: d, alpha_estimate, margins, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// Data only; no inequality is asserted.
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmiRow {
    pub t: f64,
    pub lambda: f64,
    /// `λ_t^{-1/2} - [(1-t)λ₀^{-1/2} + tλ₁^{-1/2}]`, relative to the chord.
    pub strong_margin: f64,
    /// `(1-t)λ₀ + tλ₁ - λ_t`, relative to the chord.
    pub weak_margin: f64,
    pub mesh_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmiReport {
    pub bc: String,
    pub rows: Vec<BmiRow>,
    pub slack: f64,
    pub verdict: Verdict,
}

/// Brunn–Minkowski inequalities along `(1-t)K₀ ⊕ tK₁` with FEM eigenvalues.
///
/// Each body is meshed at `mesh_factor` times its own diameter bound, so the
/// margins are invariant under joint scaling. Robin runs only report.
pub fn brunn_minkowski_check(
    k0: &ConvexBody,
    k1: &ConvexBody,
    t_points: &[f64],
    bc: BoundaryCondition,
    mesh_factor: f64,
    slack: &SlackModel,
) -> Result<BmiReport> {
    let lam = |k: &ConvexBody| -> Result<(f64, f64)> {
        let r = k.to_radial()?;
        let m = mesh::triangulate(&r, mesh_factor * 2.0 * r.max_radius())?;
        let e = eigen::solve(&m, bc, SolveOptions::default())?;
        Ok((e.lambda1, m.h_max / (2.0 * r.max_radius())))
    };
    let (l0, h0) = lam(k0)?;
    let (l1, h1) = lam(k1)?;
    let mut rows = Vec::new();
    let mut worst_h = h0.max(h1);
    for &t in t_points {
        let kt = ConvexBody::combine(k0, k1, t)?;
        let (lt, ht) = lam(&kt)?;
        worst_h = worst_h.max(ht);
        let strong_chord = (1.0 - t) * l0.powf(-0.5) + t * l1.powf(-0.5);
        let weak_chord = (1.0 - t) * l0 + t * l1;
        rows.push(BmiRow {
            t,
            lambda: lt,
            strong_margin: (lt.powf(-0.5) - strong_chord) / strong_chord,
            weak_margin: (weak_chord - lt) / weak_chord,
            mesh_h: ht,
        });
    }
    let s = slack.value(0.0, worst_h);
    let verdict = match bc {
        BoundaryCondition::Robin(_) => Verdict::Report,
        BoundaryCondition::Dirichlet => {
            if rows.iter().all(|r| r.strong_margin >= -s && r.weak_margin >= -s) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    };
    Ok(BmiReport { bc: bc.to_string(), rows, slack: s, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaReport {
    pub power_form: bool,
    pub linear_form: bool,
    /// Whether the power form implies the linear form for this `σ`.
    pub implies_linear: bool,
}

/// Check `F_t^{1/σ} ≥ (1-t)F₀^{1/σ} + tF₁^{1/σ}` and its linear consequence on
/// samples along a path (`values[0]` at `t = 0`, last at `t = 1`).
///
/// For `σ < 0` the linear form reads `F_t ≤ (1-t)F₀ + tF₁` (convexity of
/// `z ↦ z^σ`); for `0 < σ ≤ 1` it reads `F_t ≥ (1-t)F₀ + tF₁`.
pub fn general_sigma_check(t: &[f64], values: &[f64], sigma: f64, tol: f64) -> Result<SigmaReport> {
    if sigma == 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidSigma);
    }
    if t.len() != values.len() || t.len() < 2 {
        return Err(invalid("need matching t and F samples including both endpoints"));
    }
    let (f0, f1) = (values[0], values[values.len() - 1]);
    let p = 1.0 / sigma;
    let power_form = t
        .iter()
        .zip(values)
        .all(|(&s, &f)| f.powf(p) >= (1.0 - s) * f0.powf(p) + s * f1.powf(p) - tol * f.powf(p).abs());
    let implies_linear = sigma < 0.0 || sigma <= 1.0;
    let linear_form = t.iter().zip(values).all(|(&s, &f)| {
        let chord = (1.0 - s) * f0 + s * f1;
        if sigma < 0.0 {
            f <= chord + tol * chord.abs()
        } else {
            f >= chord - tol * chord.abs()
        }
    });
    Ok(SigmaReport { power_form, linear_form, implies_linear })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::disk_dirichlet_exact;

    fn cfg(bc: BoundaryCondition) -> VariationConfig {
        VariationConfig { mesh_factor: 0.02, ..VariationConfig::new(bc) }
    }

    #[test]
    fn dilation_of_disk_dirichlet() {
        let b = RadialDomain::ball(1.0, 256).unwrap();
        let c = cfg(BoundaryCondition::Dirichlet);
        let f = PerturbationField::dilation(256);
        let exact = -2.0 * disk_dirichlet_exact(1.0);
        let bw = first_variation(&b, &f, &c).unwrap();
        let fd = finite_diff_variation(&b, &f, &c, 1).unwrap();
        assert!((bw - exact).abs() < 5e-3 * exact.abs(), "{bw} vs {exact}");
        assert!((fd - exact).abs() < 5e-3 * exact.abs(), "{fd} vs {exact}");
        let fd2 = finite_diff_variation(&b, &f, &c, 2).unwrap();
        assert!((fd2 - 6.0 * disk_dirichlet_exact(1.0)).abs() < 1e-2 * fd2, "{fd2}");
    }

    #[test]
    fn translation_does_not_move_lambda() {
        let d = crate::catalog::random_radial(3, 0.3).unwrap();
        let c = cfg(BoundaryCondition::Robin(1.0));
        let f = PerturbationField::translation(&d, [0.6, -0.8]);
        let scale = first_variation(&d, &PerturbationField::dilation(256), &c).unwrap().abs();
        assert!(first_variation(&d, &f, &c).unwrap().abs() < 1e-2 * scale);
    }

    #[test]
    fn field_norm_of_dilation_on_unit_disk() {
        let b = RadialDomain::ball(1.0, 256).unwrap();
        let n = PerturbationField::dilation(256).w12_norm(&b);
        assert!((n * n - 2.0 * PI).abs() < 1e-12);
        let g: Vec<f64> = (0..256).map(|i| (3.0 * b.angle(i)).cos()).collect();
        let n = PerturbationField::normal(g).w12_norm(&b);
        assert!((n * n - 10.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn sigma_checker() {
        let t: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let exact: Vec<f64> = t.iter().map(|s| (1.0 + 2.0 * s).powi(-2)).collect();
        let r = general_sigma_check(&t, &exact, -2.0, 1e-12).unwrap();
        assert!(r.power_form && r.linear_form);
        let bad: Vec<f64> = t.iter().map(|s| 1.0 + s * (1.0 - s)).collect();
        let r = general_sigma_check(&t, &bad, -2.0, 1e-12).unwrap();
        assert!(!r.power_form && !r.linear_form);
        assert!(matches!(general_sigma_check(&t, &exact, 0.0, 0.0), Err(Error::InvalidSigma)));
        let constant = vec![3.0; t.len()];
        let r = general_sigma_check(&t, &constant, -2.0, 1e-12).unwrap();
        assert!(r.power_form && r.linear_form);
    }
}
