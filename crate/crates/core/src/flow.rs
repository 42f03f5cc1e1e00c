//! Implicit Euler (minimizing movement) scheme for the first eigenvalue
//! and checks of its contraction, EVI and a priori properties.

use std::cell::Cell;
use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::eigen::{self, BoundaryCondition, EigenResult, SolveOptions};
use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, AdmissibilityConfig, ConvexBody, MetricKind, RadialDomain, Shape, ShapeFile};
use crate::mesh::{self, MeshParams, TriMesh};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Error budget of the discrete checks, relative to the natural scale of
/// each compared quantity: `c1·h + c2·mesh_h²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlackModel {
    pub c1: f64,
    pub c2: f64,
}

impl SlackModel {
    /// `c1` is the relative error of implicit Euler on linear decay over
    /// unit time (about `h/2`); `c2` bounds the Robin disk eigenvalue error
    /// in units of `(h_max/diam)²`. Dirichlet errors are about twice that,
    /// so comparisons against exact values use multiples of the slack. See
    /// the `slack_calibration` example.
    pub const CALIBRATED: SlackModel = SlackModel { c1: 0.5, c2: 0.5 };

    pub fn value(&self, h: f64, mesh_h: f64) -> f64 {
        self.c1 * h + self.c2 * mesh_h * mesh_h
    }

    pub fn scaled(&self, factor: f64) -> SlackModel {
        SlackModel { c1: self.c1 * factor, c2: self.c2 * factor }
    }
}

impl Default for SlackModel {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerSolver {
    NelderMead,
    /// Nelder–Mead followed by one shape-gradient descent step.
    GradientAssisted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub h: f64,
    pub horizon: f64,
    pub metric: MetricKind,
    pub bc: BoundaryCondition,
    pub volume: Option<f64>,
    pub inner: InnerSolver,
    pub inner_tol: f64,
    pub max_inner_evals: usize,
    pub seed: u64,
    /// Fourier modes spanned by each Euler step.
    pub modes: usize,
    /// Mesh size as a fraction of the initial diameter.
    pub mesh_factor: f64,
    pub admissibility: AdmissibilityConfig,
    pub alpha: f64,
}

impl FlowConfig {
    pub fn new(h: f64, horizon: f64, metric: MetricKind, bc: BoundaryCondition) -> Self {
        Self {
            h,
            horizon,
            metric,
            bc,
            volume: None,
            inner: InnerSolver::NelderMead,
            inner_tol: 1e-10,
            max_inner_evals: 1500,
            seed: 0,
            modes: 8,
            mesh_factor: 0.04,
            admissibility: AdmissibilityConfig::default(),
            alpha: 0.0,
        }
    }

    pub fn with_volume(mut self, m: f64) -> Self {
        self.volume = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(invalid(format!("time step h = {} must be positive", self.h)));
        }
        if !(self.horizon >= self.h) {
            return Err(invalid(format!("horizon T = {} must be at least h = {}", self.horizon, self.h)));
        }
        if let BoundaryCondition::Robin(b) = self.bc {
            if b < 0.0 {
                return Err(Error::NegativeBeta(b));
            }
            if !(b > 0.0) {
                return Err(invalid(format!("Robin parameter must be positive, got {b}")));
            }
        }
        if let Some(m) = self.volume {
            if !(m > 0.0) {
                return Err(invalid(format!("volume constraint {m} must be positive")));
            }
        }
        if self.modes == 0 || self.mesh_factor <= 0.0 {
            return Err(invalid("flow needs at least one mode and a positive mesh factor"));
        }
        self.admissibility.validate()
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.h - 1e-9).ceil() as usize
    }
}

/// `λ₁` on meshes of one fixed topology, with a warm-started shift.
#[derive(Debug, Clone)]
pub struct EigenFunctional {
    pub bc: BoundaryCondition,
    pub params: MeshParams,
    hint: Cell<Option<f64>>,
}

impl EigenFunctional {
    /// Topology from `reference` at `target_h`.
    pub fn new(reference: &Shape, bc: BoundaryCondition, target_h: f64) -> Result<Self> {
        let r = reference.to_radial()?;
        Ok(Self { bc, params: MeshParams::choose(&r, target_h)?, hint: Cell::new(None) })
    }

    pub fn with_params(bc: BoundaryCondition, params: MeshParams) -> Self {
        Self { bc, params, hint: Cell::new(None) }
    }

    pub fn mesh(&self, shape: &Shape) -> Result<(RadialDomain, TriMesh)> {
        let r = shape.to_radial()?;
        let m = mesh::build(&r, self.params)?;
        Ok((r, m))
    }

    pub fn solve(&self, shape: &Shape) -> Result<(RadialDomain, TriMesh, EigenResult)> {
        let (r, m) = self.mesh(shape)?;
        let opts = SolveOptions { shift_hint: self.hint.get(), ..SolveOptions::default() };
        let e = eigen::solve(&m, self.bc, opts)?;
        self.hint.set(Some(e.lambda1));
        Ok((r, m, e))
    }

    pub fn lambda(&self, shape: &Shape) -> Result<f64> {
        Ok(self.solve(shape)?.2.lambda1)
    }
}

/// Affine chart `c ↦ base + Σ c_j φ_j` over low Fourier modes, followed by
/// the volume projection when one is configured.
struct Chart<'a> {
    base: &'a Shape,
    modes: usize,
    with_mean: bool,
    volume: Option<f64>,
}

impl Chart<'_> {
    fn dim(&self) -> usize {
        2 * self.modes + usize::from(self.with_mean)
    }

    /// `(mode, is_sine)` of parameter `j`.
    fn slot(&self, j: usize) -> (usize, bool) {
        let j = if self.with_mean { j } else { j + 1 };
        if j == 0 {
            (0, false)
        } else if j <= self.modes {
            (j, false)
        } else {
            (j - self.modes, true)
        }
    }

    fn shape(&self, c: &[f64]) -> Result<Shape> {
        let s = match self.base {
            Shape::Radial(r) => {
                let k = r.modes().max(self.modes);
                let mut f = crate::geometry::fourier::resize(r.fourier(), k);
                for (j, v) in c.iter().enumerate() {
                    let (m, sine) = self.slot(j);
                    f[if sine { k + m } else { m }] += v;
                }
                Shape::Radial(RadialDomain::from_fourier(f, r.n_samples())?)
            }
            Shape::Convex(b) => {
                let n = b.n_samples();
                let mut s = b.support().to_vec();
                for (i, x) in s.iter_mut().enumerate() {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    for (j, v) in c.iter().enumerate() {
                        let (m, sine) = self.slot(j);
                        let arg = m as f64 * t;
                        *x += v * if sine { arg.sin() } else { arg.cos() };
                    }
                }
                Shape::Convex(ConvexBody::new(s)?)
            }
        };
        match self.volume {
            Some(m) => s.rescale_to_area(m),
            None => Ok(s),
        }
    }
}

/// Squared norm weight of one unit of mode `m` in `metric` (quadratic
/// metrics exactly; others through their `L²` surrogate).
fn mode_weight(metric: &MetricKind, m: usize) -> f64 {
    let base = if m == 0 { 2.0 * PI } else { PI };
    match metric {
        MetricKind::SobolevRadial => base * (1.0 + (m * m) as f64),
        _ => base,
    }
}

/// Outcome of one Euler step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub shape: Shape,
    pub phi: f64,
    pub distance: f64,
    /// `Φ(h, x; result)`.
    pub value: f64,
    pub evals: usize,
    pub stagnated: bool,
}

/// Minimizing-movement driver bound to one configuration and mesh topology.
pub struct Flow {
    pub cfg: FlowConfig,
    pub functional: EigenFunctional,
}

impl Flow {
    /// Mesh topology is fixed from `u0` at `mesh_factor · diameter`.
    pub fn new(u0: &Shape, cfg: FlowConfig) -> Result<Self> {
        cfg.validate()?;
        check_metric(u0, &cfg.metric)?;
        let target = cfg.mesh_factor * u0.diameter_bound();
        let functional = EigenFunctional::new(u0, cfg.bc, target)?;
        Ok(Self { cfg, functional })
    }

    pub fn with_functional(cfg: FlowConfig, functional: EigenFunctional) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, functional })
    }

    /// `φ(y) = λ₁(y)`, or `+∞` when `y` is not admissible.
    pub fn phi(&self, y: &Shape) -> Result<f64> {
        if !y.is_admissible(&self.cfg.admissibility) {
            return Ok(f64::INFINITY);
        }
        self.functional.lambda(y)
    }

    /// `Φ(h, x; y) = φ(y) + d²(x, y) / 2h`.
    pub fn moreau(&self, h: f64, x: &Shape, y: &Shape) -> Result<f64> {
        let d = distance(x, y, &self.cfg.metric)?;
        Ok(self.phi(y)? + d * d / (2.0 * h))
    }

    /// Reference mesh size of the flow topology on `shape`.
    pub fn mesh_h(&self, shape: &Shape) -> Result<f64> {
        Ok(self.functional.mesh(shape)?.1.h_max)
    }

    /// One implicit Euler step from `x` with `φ(x) = phi_x`, time step `h`.
    pub fn step_with(&self, x: &Shape, phi_x: f64, h: f64) -> Result<StepOutcome> {
        let chart = Chart { base: x, modes: self.cfg.modes, with_mean: self.cfg.volume.is_none(), volume: self.cfg.volume };
        let eval = |c: &[f64]| -> Result<(f64, f64, Shape)> {
            let y = match chart.shape(c) {
                Ok(y) => y,
                Err(Error::InvalidInput(_)) => return Ok((f64::INFINITY, 0.0, x.clone())),
                Err(e) => return Err(e),
            };
            let lam = match self.phi(&y) {
                Ok(v) => v,
                Err(Error::IterationDivergence { .. }) | Err(Error::DegenerateTriangle { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            let d = if lam.is_finite() { distance(x, &y, &self.cfg.metric)? } else { 0.0 };
            Ok((lam, d, y))
        };
        let mut failure: Option<Error> = None;
        let objective = |c: &[f64]| match eval(c) {
            Ok((lam, d, _)) => lam + d * d / (2.0 * h),
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        };
        let scale = phi_x.abs().max(1e-3);
        let steps: Vec<f64> = (0..chart.dim())
            .map(|j| 0.1 * (2.0 * h * scale / mode_weight(&self.cfg.metric, chart.slot(j).0)).sqrt())
            .collect();
        let opts = NelderMeadOptions {
            max_evals: self.cfg.max_inner_evals,
            f_tol: self.cfg.inner_tol,
            steps,
            seed: self.cfg.seed,
        };
        let found = nelder_mead(objective, &vec![0.0; chart.dim()], &opts);
        if let Some(e) = failure {
            return Err(e);
        }
        let mut evals = found.evals;
        let mut c = found.x;
        if self.cfg.inner == InnerSolver::GradientAssisted {
            let (c2, extra) = self.polish(&chart, x, &c, h)?;
            c = c2;
            evals += extra;
        }
        let (lam, d, y) = eval(&c)?;
        evals += 1;
        let value = lam + d * d / (2.0 * h);
        if value.is_finite() && value < phi_x - 1e-12 {
            Ok(StepOutcome { shape: y, phi: lam, distance: d, value, evals, stagnated: false })
        } else {
            Ok(StepOutcome { shape: x.clone(), phi: phi_x, distance: 0.0, value: phi_x, evals, stagnated: true })
        }
    }

    /// Armijo descent along the negative gradient of `Φ` in chart coordinates;
    /// the eigenvalue part comes from the boundary first-variation formula
    /// on radial domains and from central differences on convex bodies.
    fn polish(&self, chart: &Chart, x: &Shape, c: &[f64], h: f64) -> Result<(Vec<f64>, usize)> {
        let value = |c: &[f64]| -> Result<f64> {
            match chart.shape(c) {
                Ok(y) => {
                    let lam = self.phi(&y)?;
                    let d = distance(x, &y, &self.cfg.metric)?;
                    Ok(lam + d * d / (2.0 * h))
                }
                Err(Error::InvalidInput(_)) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            }
        };
        let y = chart.shape(c)?;
        let mut evals = 1;
        let f0 = value(c)?;
        let n = c.len();
        let eps = 1e-6;
        let mut grad = vec![0.0; n];
        let lambda_grad = match &y {
            Shape::Radial(r) => {
                // dη/dc_j by central differences of the (nearly linear) chart
                let dirs: Vec<Vec<f64>> = (0..n)
                    .map(|j| -> Result<Vec<f64>> {
                        let mut cp = c.to_vec();
                        let mut cm = c.to_vec();
                        cp[j] += eps;
                        cm[j] -= eps;
                        let (p, m) = (chart.shape(&cp)?.to_radial()?, chart.shape(&cm)?.to_radial()?);
                        Ok(p.samples().iter().zip(m.samples()).map(|(a, b)| (a - b) / (2.0 * eps)).collect())
                    })
                    .collect::<Result<_>>()?;
                Some(crate::variation::radial_gradient(r, self.cfg.bc, self.functional.params, &dirs)?)
            }
            Shape::Convex(_) => None,
        };
        evals += 1;
        for j in 0..n {
            let mut cp = c.to_vec();
            let mut cm = c.to_vec();
            cp[j] += eps;
            cm[j] -= eps;
            let dist2 = |cc: &[f64]| -> Result<f64> {
                let yy = chart.shape(cc)?;
                Ok(distance(x, &yy, &self.cfg.metric)?.powi(2))
            };
            grad[j] = match &lambda_grad {
                Some(g) => g[j] + (dist2(&cp)? - dist2(&cm)?) / (4.0 * h * eps),
                None => {
                    evals += 2;
                    (value(&cp)? - value(&cm)?) / (2.0 * eps)
                }
            };
        }
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if !(gnorm2 > 0.0) || !f0.is_finite() {
            return Ok((c.to_vec(), evals));
        }
        let mut t = 1.0 / gnorm2.sqrt() * 1e-2;
        for _ in 0..20 {
            let trial: Vec<f64> = c.iter().zip(&grad).map(|(a, g)| a - t * g).collect();
            let f = value(&trial)?;
            evals += 1;
            if f <= f0 - 1e-4 * t * gnorm2 {
                return Ok((trial, evals));
            }
            t *= 0.5;
        }
        Ok((c.to_vec(), evals))
    }

    pub fn step(&self, x: &Shape, phi_x: f64) -> Result<StepOutcome> {
        self.step_with(x, phi_x, self.cfg.h)
    }

    /// Iterate `⌈T/h⌉` Euler steps from `u0`.
    pub fn run(&self, u0: &Shape) -> Result<FlowTrajectory> {
        self.run_steps(u0, self.cfg.steps())
    }

    pub fn run_steps(&self, u0: &Shape, steps: usize) -> Result<FlowTrajectory> {
        let u0 = match self.cfg.volume {
            Some(m) => u0.rescale_to_area(m)?,
            None => u0.clone(),
        };
        let phi0 = self.phi(&u0)?;
        if !phi0.is_finite() {
            let rep = u0.admissibility(&self.cfg.admissibility);
            return Err(invalid(format!("initial shape is not admissible ({:?} binds)", rep.binding())));
        }
        let mesh_h = self.mesh_h(&u0)?;
        let mut traj = FlowTrajectory {
            h: self.cfg.h,
            shapes: vec![u0.clone()],
            phi_values: vec![phi0],
            step_distances: vec![],
            step_values: vec![],
            inner_evals: vec![],
            stagnated: vec![],
            wall_times: vec![],
            mesh_h,
        };
        let mut x = u0;
        let mut phi = phi0;
        for _ in 0..steps {
            let clock = Instant::now();
            let out = self.step(&x, phi)?;
            traj.wall_times.push(clock.elapsed().as_secs_f64());
            traj.step_distances.push(out.distance);
            traj.step_values.push(out.value);
            traj.inner_evals.push(out.evals);
            traj.stagnated.push(out.stagnated);
            traj.phi_values.push(out.phi);
            traj.shapes.push(out.shape.clone());
            x = out.shape;
            phi = out.phi;
        }
        Ok(traj)
    }
}

fn check_metric(shape: &Shape, metric: &MetricKind) -> Result<()> {
    distance(shape, shape, metric).map(|_| ())
}

/// `Φ(h, x; y)` with a fresh functional meshed from `x`.
pub fn phi(h: f64, x: &Shape, y: &Shape, cfg: &FlowConfig) -> Result<f64> {
    Flow::new(x, cfg.clone())?.moreau(h, x, y)
}

/// One Euler step from `x`.
pub fn euler_step(x: &Shape, cfg: &FlowConfig) -> Result<StepOutcome> {
    let flow = Flow::new(x, cfg.clone())?;
    let x = match cfg.volume {
        Some(m) => x.rescale_to_area(m)?,
        None => x.clone(),
    };
    let p = flow.phi(&x)?;
    flow.step(&x, p)
}

pub fn run_flow(u0: &Shape, cfg: &FlowConfig) -> Result<FlowTrajectory> {
    Flow::new(u0, cfg.clone())?.run(u0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub h: f64,
    pub shapes: Vec<Shape>,
    pub phi_values: Vec<f64>,
    pub step_distances: Vec<f64>,
    /// `Φ(h, w(i); w(i+1))` as minimized.
    pub step_values: Vec<f64>,
    pub inner_evals: Vec<usize>,
    pub stagnated: Vec<bool>,
    /// Seconds per step; not part of any artifact.
    pub wall_times: Vec<f64>,
    pub mesh_h: f64,
}

impl FlowTrajectory {
    pub fn steps(&self) -> usize {
        self.step_distances.len()
    }

    /// `u_h(t) = w(⌊t/h⌋)`.
    pub fn at_time(&self, t: f64) -> &Shape {
        let i = ((t / self.h) + 1e-9).floor().max(0.0) as usize;
        &self.shapes[i.min(self.shapes.len() - 1)]
    }

    /// `φ(w(i)) - φ(w(i+1)) - d²/2h` per step; nonnegative when the step
    /// inequality holds.
    pub fn step_margins(&self) -> Vec<f64> {
        (0..self.steps())
            .map(|i| {
                let d = self.step_distances[i];
                self.phi_values[i] - self.phi_values[i + 1] - d * d / (2.0 * self.h)
            })
            .collect()
    }

    /// `2h(φ(w0) - φ(wn)) - Σ d²`, nonnegative by telescoping.
    pub fn telescoping_margin(&self) -> f64 {
        let sum: f64 = self.step_distances.iter().map(|d| d * d).sum();
        let last = *self.phi_values.last().unwrap_or(&0.0);
        2.0 * self.h * (self.phi_values[0] - last) - sum
    }

    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.phi_values.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// CSV summary: `step,t,phi,distance,evals,stagnated` (no wall times).
    pub fn summary_csv(&self) -> String {
        let mut s = String::from("step,t,phi,distance,evals,stagnated\n");
        s.push_str(&format!("0,0,{},,,\n", self.phi_values[0]));
        for i in 0..self.steps() {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                (i + 1) as f64 * self.h,
                self.phi_values[i + 1],
                self.step_distances[i],
                self.inner_evals[i],
                self.stagnated[i]
            ));
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            h: f64,
            mesh_h: f64,
            phi: &'a [f64],
            distances: &'a [f64],
            inner_evals: &'a [usize],
            stagnated: &'a [bool],
            shapes: Vec<ShapeFile>,
        }
        let out = Out {
            h: self.h,
            mesh_h: self.mesh_h,
            phi: &self.phi_values,
            distances: &self.step_distances,
            inner_evals: &self.inner_evals,
            stagnated: &self.stagnated,
            shapes: self.shapes.iter().map(ShapeFile::from).collect(),
        };
        Ok(serde_json::to_string_pretty(&out)?)
    }
}

/// One entry of the empirical Cauchy table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyEntry {
    pub t: f64,
    pub h_coarse: f64,
    pub h_fine: f64,
    pub distance: f64,
}

/// Run flows for each `h` (decreasing) and compare `u_h(t)` pairwise at
/// the sample times.
pub fn gmm_diagnostic(u0: &Shape, cfg: &FlowConfig, h_list: &[f64], times: &[f64]) -> Result<Vec<CauchyEntry>> {
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("h_list must be strictly decreasing"));
    }
    let reference = Flow::new(u0, cfg.clone())?;
    let mut trajs = Vec::new();
    for &h in h_list {
        let mut c = cfg.clone();
        c.h = h;
        let flow = Flow::with_functional(c, EigenFunctional::with_params(cfg.bc, reference.functional.params))?;
        trajs.push(flow.run(u0)?);
    }
    let mut out = Vec::new();
    for &t in times {
        for i in 0..trajs.len() {
            for j in i + 1..trajs.len() {
                let d = distance(trajs[i].at_time(t), trajs[j].at_time(t), &cfg.metric)?;
                out.push(CauchyEntry { t, h_coarse: h_list[i], h_fine: h_list[j], distance: d });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    pub alpha: f64,
    pub initial: f64,
    /// `(t, d(u(t), v(t)), e^{-αt} d(u0, v0))`.
    pub samples: Vec<(f64, f64, f64)>,
    pub max_excess: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Flow `u0` and `v0` with the same configuration and compare
/// `d(u(t), v(t))` with `e^{-αt} d(u0, v0)`; the slack is relative to `d(u0, v0)`.
pub fn contraction_check(u0: &Shape, v0: &Shape, cfg: &FlowConfig, alpha: f64, slack: &SlackModel) -> Result<ContractionReport> {
    let fu = Flow::new(u0, cfg.clone())?;
    let fv = Flow::with_functional(cfg.clone(), EigenFunctional::with_params(cfg.bc, fu.functional.params))?;
    let tu = fu.run(u0)?;
    let tv = fv.run(v0)?;
    let d0 = distance(&tu.shapes[0], &tv.shapes[0], &cfg.metric)?;
    let mut samples = Vec::new();
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..tu.shapes.len().min(tv.shapes.len()) {
        let t = i as f64 * cfg.h;
        let d = distance(&tu.shapes[i], &tv.shapes[i], &cfg.metric)?;
        let bound = (-alpha * t).exp() * d0;
        max_excess = max_excess.max(d - bound);
        samples.push((t, d, bound));
    }
    let mesh_h = tu.mesh_h.max(tv.mesh_h);
    let s = slack.value(cfg.h, mesh_h) * d0;
    Ok(ContractionReport { alpha, initial: d0, samples, max_excess, slack: s, pass: max_excess <= s })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EviReport {
    pub residuals: Vec<f64>,
    pub max_positive: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `r_i = [d²(w(i+1), z) - d²(w(i), z)]/2h + (α/2) d²(w(i+1), z) + φ(w(i+1)) - φ(z)`.
pub fn evi_residual(traj: &FlowTrajectory, z: &Shape, alpha: f64, flow: &Flow, slack: &SlackModel) -> Result<EviReport> {
    let phi_z = flow.phi(z)?;
    let d2: Vec<f64> = traj
        .shapes
        .iter()
        .map(|w| distance(w, z, &flow.cfg.metric).map(|d| d * d))
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = (0..traj.steps())
        .map(|i| (d2[i + 1] - d2[i]) / (2.0 * traj.h) + 0.5 * alpha * d2[i + 1] + traj.phi_values[i + 1] - phi_z)
        .collect();
    let max_positive = residuals.iter().copied().fold(0.0, f64::max);
    let bound = slack.value(traj.h, traj.mesh_h) * phi_z.abs();
    Ok(EviReport { residuals, max_positive, bound, pass: max_positive <= bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AprioriRow {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Compare `d²(S(t), J_{t/n}^n u0)` (finest `n` as reference) with
/// `(t/n)(φ(u0) - φ_{t/n}(u0))`.
pub fn apriori_check(u0: &Shape, t: f64, n_list: &[usize], cfg: &FlowConfig, slack: &SlackModel) -> Result<Vec<AprioriRow>> {
    let n_ref = *n_list.iter().max().ok_or_else(|| invalid("empty n_list"))?;
    let base = Flow::new(u0, cfg.clone())?;
    let params = base.functional.params;
    let run = |n: usize| -> Result<FlowTrajectory> {
        let mut c = cfg.clone();
        c.h = t / n as f64;
        c.horizon = t;
        Flow::with_functional(c, EigenFunctional::with_params(cfg.bc, params))?.run_steps(u0, n)
    };
    let reference = run(n_ref)?;
    let end_ref = reference.shapes.last().cloned().unwrap_or_else(|| u0.clone());
    let mut rows = Vec::new();
    for &n in n_list.iter().filter(|&&n| n != n_ref) {
        let tr = run(n)?;
        let d = distance(&end_ref, tr.shapes.last().unwrap_or(u0), &cfg.metric)?;
        let phi_h = tr.step_values.first().copied().unwrap_or(tr.phi_values[0]);
        let rhs = (t / n as f64) * (tr.phi_values[0] - phi_h);
        let s = slack.value(t / n as f64, tr.mesh_h) * rhs.abs();
        rows.push(AprioriRow { n, lhs: d * d, rhs, slack: s, pass: d * d <= rhs + s });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn robin_cfg(metric: MetricKind) -> FlowConfig {
        let mut c = FlowConfig::new(0.05, 0.1, metric, BoundaryCondition::Robin(1.0)).with_volume(PI);
        c.max_inner_evals = 300;
        c
    }

    #[test]
    fn config_rejects_negative_beta_and_bad_steps() {
        let mut c = robin_cfg(MetricKind::SobolevRadial);
        c.bc = BoundaryCondition::Robin(-1.0);
        assert!(matches!(c.validate(), Err(Error::NegativeBeta(_))));
        let mut c = robin_cfg(MetricKind::SobolevRadial);
        c.horizon = 0.01;
        assert!(c.validate().is_err());
    }

    #[test]
    fn phi_of_identical_shapes_is_lambda() {
        let b = Shape::Radial(RadialDomain::ball(1.0, 256).unwrap());
        let cfg = robin_cfg(MetricKind::SobolevRadial);
        let flow = Flow::new(&b, cfg).unwrap();
        let lam = flow.phi(&b).unwrap();
        // the warm-started shift changes only the last digits
        assert!((flow.moreau(0.05, &b, &b).unwrap() - lam).abs() < 1e-12 * lam);
        assert!(flow.moreau(1e12, &b, &b.rescale_to_area(2.0).unwrap()).unwrap().is_finite());
    }

    #[test]
    fn constrained_ball_is_stationary() {
        let b = Shape::Radial(RadialDomain::ball(1.0, 256).unwrap());
        let traj = run_flow(&b, &robin_cfg(MetricKind::SobolevRadial)).unwrap();
        assert!(traj.stagnated.iter().all(|s| *s));
        assert!(traj.shapes.iter().all(|s| *s == traj.shapes[0]));
    }

    #[test]
    fn ellipse_step_moves_toward_ball() {
        let e = Shape::Radial(RadialDomain::from_fn(|t| 1.0 / (t.cos().powi(2) / 1.44 + t.sin().powi(2) / 0.6944).sqrt(), 256, 32).unwrap());
        let cfg = robin_cfg(MetricKind::SobolevRadial);
        let b = Shape::Radial(RadialDomain::ball(1.0, 256).unwrap());
        let ch = MetricKind::Char { container: 4.0 };
        let x = e.rescale_to_area(PI).unwrap();
        let out = euler_step(&x, &cfg).unwrap();
        assert!(!out.stagnated);
        assert!(distance(&out.shape, &b, &ch).unwrap() < distance(&x, &b, &ch).unwrap());
        assert!((out.shape.area() - PI).abs() < 1e-8 * PI);
    }
}
