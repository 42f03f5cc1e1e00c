//! Experiment specifications (flat `key = value` configs with command-line
//! overrides) and the runner that turns them into reports.
//!
//! A run computes everything in memory first; artifacts are written only
//! after the whole computation succeeded.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, ShapeKind};
use crate::eigen::{self, BoundaryCondition, SolveOptions};
use crate::error::{invalid, Error, Result};
use crate::flow::{self, Flow, FlowConfig, InnerSolver, SlackModel};
use crate::geometry::{MetricKind, RadialDomain, Shape};
use crate::mesh;
use crate::negbeta;
use crate::variation::{self, PerturbationField, VariationConfig, Verdict};
use crate::verify::{self, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eigen,
    Flow,
    Gmm,
    Contraction,
    Evi,
    Apriori,
    Bmi,
    Alpha,
    Variation,
    NegbetaDemo,
    Verify,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Eigen,
        Command::Flow,
        Command::Gmm,
        Command::Contraction,
        Command::Evi,
        Command::Apriori,
        Command::Bmi,
        Command::Alpha,
        Command::Variation,
        Command::NegbetaDemo,
        Command::Verify,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Eigen => "eigen",
            Command::Flow => "flow",
            Command::Gmm => "gmm",
            Command::Contraction => "contraction",
            Command::Evi => "evi",
            Command::Apriori => "apriori",
            Command::Bmi => "bmi",
            Command::Alpha => "alpha",
            Command::Variation => "variation",
            Command::NegbetaDemo => "negbeta-demo",
            Command::Verify => "verify",
        }
    }

    /// `(required, optional)` parameter keys.
    fn keys(&self) -> (&'static [&'static str], &'static [&'static str]) {
        const FLOW: &[&str] = &[
            "bc", "beta", "metric", "h", "T", "volume", "inner", "inner_tol", "max_evals", "modes", "mesh_factor",
        ];
        match self {
            Command::Eigen => (&["shape"], &["bc", "beta", "mesh_h", "refine", "k"]),
            Command::Flow => (&["init"], FLOW),
            Command::Gmm => (&["init", "h_list", "times"], FLOW),
            Command::Contraction => (&["u0", "v0"], &["bc", "beta", "metric", "h", "T", "alpha", "max_evals", "modes", "mesh_factor"]),
            Command::Evi => (&["init"], &["bc", "beta", "metric", "h", "T", "alpha", "points", "max_evals", "modes", "mesh_factor"]),
            Command::Apriori => (&["init", "t", "n_list"], &["bc", "beta", "metric", "max_evals", "modes", "mesh_factor"]),
            Command::Bmi => (&["k0", "k1"], &["bc", "beta", "t_points", "mesh_factor"]),
            Command::Alpha => (&["eta0", "eta1"], &["beta", "points", "mesh_factor"]),
            Command::Variation => (&["shape"], &["bc", "beta", "field", "mesh_factor"]),
            Command::NegbetaDemo => (&[], &["beta", "amplitude", "teeth", "rings"]),
            Command::Verify => (&[], &["level"]),
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid(format!("unknown command '{s}'")))
    }
}

/// One experiment: a command, its flat parameters, a seed and an output path.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Config line of each parameter (absent for overrides).
    lines: BTreeMap<String, usize>,
}

impl ExperimentSpec {
    pub fn new(command: Command) -> Self {
        Self {
            name: command.name().to_string(),
            command,
            params: BTreeMap::new(),
            seed: 0,
            out: None,
            lines: BTreeMap::new(),
        }
    }

    /// Parse a config file. `command` must appear unless `default` is given;
    /// `#` starts a comment.
    pub fn parse_config(text: &str, default: Option<Command>) -> Result<Self> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or(Error::Config { line, message: format!("expected key = value, got '{body}'") })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Config { line, message: "empty key".into() });
            }
            if entries.iter().any(|(_, key, _)| key == k) {
                return Err(Error::Config { line, message: format!("duplicate key '{k}'") });
            }
            entries.push((line, k.to_string(), v.to_string()));
        }
        let command = match entries.iter().find(|e| e.1 == "command") {
            Some((line, _, v)) => v.parse().map_err(|_| Error::Config { line: *line, message: format!("unknown command '{v}'") })?,
            None => default.ok_or(Error::Config { line: 0, message: "missing 'command'".into() })?,
        };
        let mut spec = Self::new(command);
        for (line, k, v) in entries {
            spec.set_at(&k, &v, line)?;
        }
        Ok(spec)
    }

    /// Set one parameter as a command-line override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_at(key, value, 0)
    }

    fn set_at(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let fail = |message: String| if line > 0 { Error::Config { line, message } } else { invalid(message) };
        let key = key.replace('-', "_");
        match key.as_str() {
            "command" => {
                let c: Command = value.parse().map_err(|_| fail(format!("unknown command '{value}'")))?;
                if c != self.command {
                    return Err(fail(format!("command '{value}' conflicts with '{}'", self.command.name())));
                }
            }
            "name" => self.name = value.to_string(),
            "seed" => self.seed = value.parse().map_err(|_| fail(format!("seed must be an unsigned integer, got '{value}'")))?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                let (req, opt) = self.command.keys();
                if !req.contains(&key.as_str()) && !opt.contains(&key.as_str()) {
                    return Err(fail(format!("'{key}' is not a parameter of '{}'", self.command.name())));
                }
                self.params.insert(key.clone(), value.to_string());
                if line > 0 {
                    self.lines.insert(key, line);
                } else {
                    self.lines.remove(&key);
                }
            }
        }
        Ok(())
    }

    fn err(&self, key: &str, message: String) -> Error {
        match self.lines.get(key) {
            Some(&line) => Error::Config { line, message },
            None => invalid(message),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.err(key, format!("'{key}' must be a number, got '{v}'"))),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.err(key, format!("'{key}' must be a nonnegative integer, got '{v}'"))),
        }
    }

    fn list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<T>().map_err(|_| self.err(key, format!("bad entry '{s}' in '{key}'"))))
                .collect(),
        }
    }

    fn bc(&self) -> Result<BoundaryCondition> {
        let beta = self.f64_or("beta", 1.0)?;
        match self.raw("bc").unwrap_or("robin") {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "robin" => {
                if !beta.is_finite() {
                    return Err(self.err("beta", "beta must be finite".into()));
                }
                Ok(BoundaryCondition::Robin(beta))
            }
            other => Err(self.err("bc", format!("bc must be dirichlet or robin, got '{other}'"))),
        }
    }

    fn metric(&self, default: &str) -> Result<MetricKind> {
        let container = crate::geometry::AdmissibilityConfig::default().container;
        match self.raw("metric").unwrap_or(default) {
            "l2" => Ok(MetricKind::LpSupport { p: 2.0 }),
            "hausdorff" => Ok(MetricKind::HausdorffCompact),
            "hausdorff-open" => Ok(MetricKind::HausdorffOpen { container }),
            "char" => Ok(MetricKind::Char { container }),
            "sobolev" => Ok(MetricKind::SobolevRadial),
            other => Err(self.err("metric", format!("unknown metric '{other}'"))),
        }
    }

    /// Catalog name or path to a shape file.
    fn shape(&self, key: &str, kind: ShapeKind) -> Result<Shape> {
        let v = self.raw(key).ok_or_else(|| invalid(format!("missing '{key}'")))?;
        let path = Path::new(v);
        if v.ends_with(".json") || path.is_file() {
            return Shape::load(path);
        }
        catalog::parse(v, kind).map_err(|e| self.err(key, e.to_string()))
    }

    /// Check parameter completeness and parse every value, before any compute.
    pub fn validate(&self) -> Result<()> {
        let (req, _) = self.command.keys();
        if let Some(k) = req.iter().find(|k| !self.params.contains_key(**k)) {
            return Err(invalid(format!("'{}' needs parameter '{k}'", self.command.name())));
        }
        match self.command {
            Command::Eigen => {
                self.bc()?;
                self.shape("shape", ShapeKind::Radial)?;
                self.f64_or("mesh_h", 0.04)?;
                let k = self.usize_or("k", 2)?;
                if !(1..=2).contains(&k) {
                    return Err(self.err("k", "k must be 1 or 2".into()));
                }
                self.usize_or("refine", 0)?;
            }
            Command::Flow | Command::Gmm | Command::Contraction | Command::Evi | Command::Apriori => {
                let cfg = self.flow_config(1.0)?;
                let kind = shape_kind(&cfg.metric);
                for key in ["init", "u0", "v0"] {
                    if self.params.contains_key(key) {
                        self.shape(key, kind)?;
                    }
                }
                if self.command == Command::Gmm {
                    let hs: Vec<f64> = self.list("h_list", &[])?;
                    if hs.is_empty() || hs.windows(2).any(|w| w[1] >= w[0]) {
                        return Err(self.err("h_list", "h_list must be strictly decreasing".into()));
                    }
                    self.list::<f64>("times", &[])?;
                }
                if self.command == Command::Apriori {
                    self.f64_or("t", 0.0)?;
                    let ns: Vec<usize> = self.list("n_list", &[])?;
                    if ns.len() < 2 || ns.contains(&0) {
                        return Err(self.err("n_list", "n_list needs at least two positive entries".into()));
                    }
                }
                self.f64_or("alpha", 0.0)?;
                self.usize_or("points", 5)?;
            }
            Command::Bmi => {
                self.bc()?;
                self.shape("k0", ShapeKind::Convex)?;
                self.shape("k1", ShapeKind::Convex)?;
                self.list::<f64>("t_points", &[])?;
                self.f64_or("mesh_factor", 0.02)?;
            }
            Command::Alpha => {
                self.shape("eta0", ShapeKind::Radial)?;
                self.shape("eta1", ShapeKind::Radial)?;
                if self.f64_or("beta", 1.0)? <= 0.0 {
                    return Err(self.err("beta", "alpha-convexity needs beta > 0".into()));
                }
                self.usize_or("points", 11)?;
            }
            Command::Variation => {
                self.bc()?;
                self.shape("shape", ShapeKind::Radial)?;
                self.field_spec()?;
            }
            Command::NegbetaDemo => {
                self.f64_or("beta", -1.0)?;
                self.f64_or("amplitude", 0.1)?;
                self.list::<usize>("teeth", &[])?;
                self.usize_or("rings", 24)?;
            }
            Command::Verify => {
                self.level()?;
            }
        }
        Ok(())
    }

    fn level(&self) -> Result<Level> {
        match self.raw("level").unwrap_or("quick") {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(self.err("level", format!("level must be quick or full, got '{other}'"))),
        }
    }

    fn field_spec(&self) -> Result<FieldSpec> {
        let v = self.raw("field").unwrap_or("dilation");
        if v == "dilation" {
            return Ok(FieldSpec::Dilation);
        }
        if let Some(rest) = v.strip_prefix("translation:") {
            let parts: Vec<f64> = rest.split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| self.err("field", format!("bad translation '{v}'")))?;
            if parts.len() == 2 {
                return Ok(FieldSpec::Translation([parts[0], parts[1]]));
            }
        }
        if let Some(rest) = v.strip_prefix("random:") {
            if let Ok(seed) = rest.trim().parse() {
                return Ok(FieldSpec::Random(seed));
            }
        }
        Err(self.err("field", format!("field must be dilation, translation:x,y or random:seed, got '{v}'")))
    }

    /// Flow configuration from the parameters, with `default_h` as the step.
    pub fn flow_config(&self, default_h: f64) -> Result<FlowConfig> {
        let bc = self.bc()?;
        let metric = self.metric(if self.command == Command::Contraction || self.command == Command::Apriori || self.command == Command::Evi {
            "l2"
        } else {
            "sobolev"
        })?;
        let h = self.f64_or("h", default_h)?;
        let horizon = self.f64_or("T", if self.command == Command::Apriori { self.f64_or("t", 1.0)? } else { 1.0 })?;
        let bc = if matches!(self.command, Command::Contraction | Command::Evi | Command::Apriori) && self.raw("bc").is_none() {
            BoundaryCondition::Dirichlet
        } else {
            bc
        };
        let mut cfg = FlowConfig::new(h, horizon.max(h), metric, bc);
        if let Some(v) = self.raw("volume") {
            let m: f64 = v.parse().map_err(|_| self.err("volume", format!("volume must be a number, got '{v}'")))?;
            cfg = cfg.with_volume(m);
        }
        cfg.inner = match self.raw("inner").unwrap_or("nelder_mead") {
            "nelder_mead" | "nelder-mead" => InnerSolver::NelderMead,
            "gradient_assisted" | "gradient-assisted" => InnerSolver::GradientAssisted,
            other => return Err(self.err("inner", format!("unknown inner solver '{other}'"))),
        };
        cfg.inner_tol = self.f64_or("inner_tol", cfg.inner_tol)?;
        cfg.max_inner_evals = self.usize_or("max_evals", cfg.max_inner_evals)?;
        cfg.modes = self.usize_or("modes", cfg.modes)?;
        cfg.mesh_factor = self.f64_or("mesh_factor", cfg.mesh_factor)?;
        cfg.alpha = self.f64_or("alpha", 0.0)?;
        cfg.seed = self.seed;
        if let BoundaryCondition::Robin(b) = cfg.bc {
            if b < 0.0 {
                return Err(Error::NegativeBeta(b));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FieldSpec {
    Dilation,
    Translation([f64; 2]),
    Random(u64),
}

fn shape_kind(metric: &MetricKind) -> ShapeKind {
    match metric {
        MetricKind::LpSupport { .. } => ShapeKind::Convex,
        _ => ShapeKind::Radial,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    /// File name relative to the output location.
    pub name: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    /// 0 on completion or PASS, 2 on a property FAIL.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Complete | Status::Pass => 0,
            Status::Fail => 2,
        }
    }

    /// Write artifacts under `out`: a directory, or for a single-file
    /// command the path of the primary artifact (siblings share its stem).
    pub fn write(&self, out: &Path) -> Result<()> {
        let targets: Vec<PathBuf> = if out.extension().is_some() {
            let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
            let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
            self.artifacts
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if i == 0 {
                        out.to_path_buf()
                    } else {
                        let ext = Path::new(&a.name).extension().and_then(|e| e.to_str()).unwrap_or("txt");
                        dir.join(format!("{stem}.{ext}"))
                    }
                })
                .collect()
        } else {
            self.artifacts.iter().map(|a| out.join(&a.name)).collect()
        };
        let mut written = Vec::new();
        for (path, a) in targets.iter().zip(&self.artifacts) {
            let res = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map_or(Ok(()), std::fs::create_dir_all)
                .and_then(|_| std::fs::write(path, &a.content));
            if let Err(e) = res {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                return Err(e.into());
            }
            written.push(path.clone());
        }
        Ok(())
    }
}

/// Validate and run a spec entirely in memory.
pub fn run(spec: &ExperimentSpec) -> Result<Outcome> {
    spec.validate()?;
    match spec.command {
        Command::Eigen => run_eigen(spec),
        Command::Flow => run_flow(spec),
        Command::Gmm => run_gmm(spec),
        Command::Contraction => run_contraction(spec),
        Command::Evi => run_evi(spec),
        Command::Apriori => run_apriori(spec),
        Command::Bmi => run_bmi(spec),
        Command::Alpha => run_alpha(spec),
        Command::Variation => run_variation(spec),
        Command::NegbetaDemo => run_negbeta(spec),
        Command::Verify => run_verify(spec),
    }
}

fn csv_artifact(name: &str, content: String) -> Artifact {
    Artifact { name: name.to_string(), content }
}

fn run_eigen(spec: &ExperimentSpec) -> Result<Outcome> {
    let bc = spec.bc()?;
    let shape = spec.shape("shape", ShapeKind::Radial)?;
    let domain = shape.to_radial()?;
    let mut m = mesh::triangulate(&domain, spec.f64_or("mesh_h", 0.04)?)?;
    for _ in 0..spec.usize_or("refine", 0)? {
        m = m.refine(&domain)?;
    }
    let k = spec.usize_or("k", 2)?;
    let e = eigen::solve(&m, bc, SolveOptions::pairs(k))?;
    let id = spec.raw("shape").unwrap_or("shape");
    let mut csv = String::from("domain_id,bc,beta,h_max,lambda1,lambda2,residual\n");
    let beta = bc.beta().map_or(String::new(), |b| b.to_string());
    let l2 = e.lambda2.map_or(String::new(), |v| v.to_string());
    writeln!(csv, "{id},{},{beta},{},{},{l2},{}", bc.name(), e.mesh_h, e.lambda1, e.residual).ok();
    let mut summary = format!("{id} {bc}: lambda1 = {:.8} (h_max {:.4}, {} vertices)\n", e.lambda1, e.mesh_h, m.n_vertices());
    let is_disk = domain.samples().iter().all(|r| (r - domain.samples()[0]).abs() < 1e-12);
    if is_disk {
        let exact = eigen::disk_oracle(domain.samples()[0], bc)?;
        writeln!(summary, "disk oracle {exact:.8}, relative error {:.3e}", (e.lambda1 - exact).abs() / exact).ok();
    }
    Ok(Outcome {
        status: Status::Complete,
        summary,
        artifacts: vec![csv_artifact("eigen.csv", csv), csv_artifact("mesh.off", m.to_off())],
    })
}

fn run_flow(spec: &ExperimentSpec) -> Result<Outcome> {
    let cfg = spec.flow_config(0.05)?;
    let u0 = spec.shape("init", shape_kind(&cfg.metric))?;
    let traj = flow::run_flow(&u0, &cfg)?;
    let summary = format!(
        "{} steps, phi {:.8} -> {:.8}, {} stagnated, telescoping margin {:.3e}\n",
        traj.steps(),
        traj.phi_values[0],
        traj.phi_values.last().copied().unwrap_or(f64::NAN),
        traj.stagnated.iter().filter(|s| **s).count(),
        traj.telescoping_margin()
    );
    Ok(Outcome {
        status: Status::Complete,
        summary,
        artifacts: vec![Artifact { name: "traj.json".into(), content: traj.to_json()? }, csv_artifact("traj.csv", traj.summary_csv())],
    })
}

fn run_gmm(spec: &ExperimentSpec) -> Result<Outcome> {
    let hs: Vec<f64> = spec.list("h_list", &[])?;
    let times: Vec<f64> = spec.list("times", &[])?;
    let mut cfg = spec.flow_config(hs[0])?;
    let t_max = times.iter().copied().fold(cfg.horizon, f64::max);
    cfg.horizon = t_max.max(hs[0]);
    let u0 = spec.shape("init", shape_kind(&cfg.metric))?;
    let table = flow::gmm_diagnostic(&u0, &cfg, &hs, &times)?;
    let mut csv = String::from("t,h_coarse,h_fine,distance\n");
    for e in &table {
        writeln!(csv, "{},{},{},{}", e.t, e.h_coarse, e.h_fine, e.distance).ok();
    }
    Ok(Outcome { status: Status::Complete, summary: format!("{} cross distances\n", table.len()), artifacts: vec![csv_artifact("gmm.csv", csv)] })
}

fn run_contraction(spec: &ExperimentSpec) -> Result<Outcome> {
    let cfg = spec.flow_config(0.1)?;
    let kind = shape_kind(&cfg.metric);
    let (u0, v0) = (spec.shape("u0", kind)?, spec.shape("v0", kind)?);
    let rep = flow::contraction_check(&u0, &v0, &cfg, spec.f64_or("alpha", 0.0)?, &SlackModel::CALIBRATED)?;
    let mut csv = String::from("t,distance,bound\n");
    for (t, d, b) in &rep.samples {
        writeln!(csv, "{t},{d},{b}").ok();
    }
    let summary = format!(
        "contraction: max excess {:.3e}, slack {:.3e} -> {}\n",
        rep.max_excess,
        rep.slack,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    Ok(Outcome { status: pass_fail(rep.pass), summary, artifacts: vec![csv_artifact("contraction.csv", csv)] })
}

fn pass_fail(p: bool) -> Status {
    if p {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Test points for the EVI check: the start plus seeded low-mode
/// perturbations of it (they share the flow's parameter space).
pub fn evi_test_points(u0: &Shape, count: usize, seed: u64) -> Result<Vec<Shape>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![u0.clone()];
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count {
            return Err(invalid("could not draw admissible EVI test points"));
        }
        let scale = 0.15 * u0.max_radius();
        let coef: Vec<(usize, f64, f64)> = (0..=4)
            .map(|m| (m, scale * rng.gen_range(-1.0..1.0) / (1 + m * m) as f64, scale * rng.gen_range(-1.0..1.0) / (1 + m * m) as f64))
            .collect();
        let z = match u0 {
            Shape::Convex(k) => {
                let n = k.n_samples();
                let s = k
                    .support()
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let t = 2.0 * PI * i as f64 / n as f64;
                        r + coef.iter().map(|(m, a, b)| a * (*m as f64 * t).cos() + b * (*m as f64 * t).sin()).sum::<f64>()
                    })
                    .collect();
                crate::geometry::ConvexBody::new(s).map(Shape::Convex)
            }
            Shape::Radial(r) => {
                let n = r.n_samples();
                let off: Vec<f64> = (0..n)
                    .map(|i| {
                        let t = r.angle(i);
                        coef.iter().map(|(m, a, b)| a * (*m as f64 * t).cos() + b * (*m as f64 * t).sin()).sum::<f64>()
                    })
                    .collect();
                r.displaced(&off).map(Shape::Radial)
            }
        };
        if let Ok(z) = z {
            if z.is_admissible(&crate::geometry::AdmissibilityConfig::default()) {
                out.push(z);
            }
        }
    }
    Ok(out)
}

fn run_evi(spec: &ExperimentSpec) -> Result<Outcome> {
    let cfg = spec.flow_config(0.1)?;
    let u0 = spec.shape("init", shape_kind(&cfg.metric))?;
    let flow = Flow::new(&u0, cfg.clone())?;
    let traj = flow.run(&u0)?;
    let alpha = spec.f64_or("alpha", 0.0)?;
    let mut csv = String::from("point,step,residual\n");
    let mut all_pass = true;
    let mut summary = String::new();
    for (p, z) in evi_test_points(&u0, spec.usize_or("points", 5)?, spec.seed)?.iter().enumerate() {
        let rep = flow::evi_residual(&traj, z, alpha, &flow, &SlackModel::CALIBRATED)?;
        for (i, r) in rep.residuals.iter().enumerate() {
            writeln!(csv, "{p},{},{r}", i + 1).ok();
        }
        writeln!(summary, "point {p}: max positive residual {:.3e} (bound {:.3e})", rep.max_positive, rep.bound).ok();
        all_pass &= rep.pass;
    }
    Ok(Outcome { status: pass_fail(all_pass), summary, artifacts: vec![csv_artifact("evi.csv", csv)] })
}

fn run_apriori(spec: &ExperimentSpec) -> Result<Outcome> {
    let cfg = spec.flow_config(0.1)?;
    let u0 = spec.shape("init", shape_kind(&cfg.metric))?;
    let t = spec.f64_or("t", 1.0)?;
    let ns: Vec<usize> = spec.list("n_list", &[])?;
    let rows = flow::apriori_check(&u0, t, &ns, &cfg, &SlackModel::CALIBRATED)?;
    let mut csv = String::from("n,lhs,rhs,slack,pass\n");
    for r in &rows {
        writeln!(csv, "{},{},{},{},{}", r.n, r.lhs, r.rhs, r.slack, r.pass).ok();
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome { status: pass_fail(pass), summary: format!("a priori estimate: {}\n", if pass { "PASS" } else { "FAIL" }), artifacts: vec![csv_artifact("apriori.csv", csv)] })
}

fn run_bmi(spec: &ExperimentSpec) -> Result<Outcome> {
    let bc = match spec.raw("bc") {
        None => BoundaryCondition::Dirichlet,
        Some(_) => spec.bc()?,
    };
    let to_convex = |s: Shape| match s {
        Shape::Convex(k) => Ok(k),
        Shape::Radial(_) => Err(invalid("Brunn-Minkowski checks need convex bodies")),
    };
    let k0 = to_convex(spec.shape("k0", ShapeKind::Convex)?)?;
    let k1 = to_convex(spec.shape("k1", ShapeKind::Convex)?)?;
    let ts: Vec<f64> = spec.list("t_points", &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])?;
    let rep = variation::brunn_minkowski_check(&k0, &k1, &ts, bc, spec.f64_or("mesh_factor", 0.02)?, &SlackModel::CALIBRATED)?;
    let mut csv = String::from("t,lambda,strong_margin,weak_margin\n");
    for r in &rep.rows {
        writeln!(csv, "{},{},{},{}", r.t, r.lambda, r.strong_margin, r.weak_margin).ok();
    }
    let status = match rep.verdict {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Report => Status::Complete,
    };
    let min_strong = rep.rows.iter().map(|r| r.strong_margin).fold(f64::INFINITY, f64::min);
    let min_weak = rep.rows.iter().map(|r| r.weak_margin).fold(f64::INFINITY, f64::min);
    let summary = format!("{}: min strong margin {min_strong:.3e}, min weak margin {min_weak:.3e}, slack {:.3e}, {:?}\n", rep.bc, rep.slack, rep.verdict);
    Ok(Outcome { status, summary, artifacts: vec![csv_artifact("bmi.csv", csv), Artifact { name: "bmi.json".into(), content: serde_json::to_string_pretty(&rep)? }] })
}

fn run_alpha(spec: &ExperimentSpec) -> Result<Outcome> {
    let bc = BoundaryCondition::Robin(spec.f64_or("beta", 1.0)?);
    let e0 = spec.shape("eta0", ShapeKind::Radial)?.to_radial()?;
    let e1 = spec.shape("eta1", ShapeKind::Radial)?.to_radial()?;
    let (e0, e1) = common_sampling(e0, e1)?;
    let cfg = VariationConfig { mesh_factor: spec.f64_or("mesh_factor", 0.02)?, ..VariationConfig::new(bc) };
    let rep = variation::alpha_convexity_check(&e0, &e1, spec.usize_or("points", 11)?, &cfg)?;
    let mut csv = String::from("t,h,chord,margin\n");
    for (i, t) in rep.t_grid.iter().enumerate() {
        writeln!(csv, "{t},{},{},{}", rep.values[i], rep.values[i] + rep.margins[i], rep.margins[i]).ok();
    }
    let summary = format!("alpha estimate {:.6}, d = {:.6}, {}\n", rep.alpha_estimate, rep.distance, if rep.pass { "PASS" } else { "FAIL" });
    Ok(Outcome { status: pass_fail(rep.pass), summary, artifacts: vec![csv_artifact("alpha.csv", csv), Artifact { name: "alpha.json".into(), content: serde_json::to_string_pretty(&rep)? }] })
}

/// Bring two radial domains to the same mode count.
pub fn common_sampling(a: RadialDomain, b: RadialDomain) -> Result<(RadialDomain, RadialDomain)> {
    if a.n_samples() != b.n_samples() {
        return Err(invalid("radial domains need the same sample count"));
    }
    let k = a.modes().max(b.modes());
    Ok((a.with_modes(k)?, b.with_modes(k)?))
}

fn run_variation(spec: &ExperimentSpec) -> Result<Outcome> {
    let bc = spec.bc()?;
    let d = spec.shape("shape", ShapeKind::Radial)?.to_radial()?;
    let cfg = VariationConfig { mesh_factor: spec.f64_or("mesh_factor", 0.01)?, ..VariationConfig::new(bc) };
    let field = match spec.field_spec()? {
        FieldSpec::Dilation => PerturbationField::dilation(d.n_samples()),
        FieldSpec::Translation(v) => PerturbationField::translation(&d, v),
        FieldSpec::Random(seed) => random_field(&d, seed),
    };
    let bw = variation::first_variation(&d, &field, &cfg)?;
    let fd = variation::finite_diff_variation(&d, &field, &cfg, 1)?;
    let fd2 = variation::finite_diff_variation(&d, &field, &cfg, 2)?;
    let csv = format!("boundary_integral,finite_difference,second_variation,field_norm\n{bw},{fd},{fd2},{}\n", field.w12_norm(&d));
    let summary = format!("first variation: boundary integral {bw:.8}, finite difference {fd:.8}; second variation {fd2:.6}\n");
    Ok(Outcome { status: Status::Complete, summary, artifacts: vec![csv_artifact("variation.csv", csv)] })
}

/// `g = 1 + Σ_{m=1}^{4} (a_m cos mθ + b_m sin mθ)` with `|a_m|, |b_m| ≤ 0.3/m`.
pub fn random_field(d: &RadialDomain, seed: u64) -> PerturbationField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef: Vec<(f64, f64, f64)> = (1..=4).map(|m| (m as f64, 0.3 / m as f64 * rng.gen_range(-1.0..1.0), 0.3 / m as f64 * rng.gen_range(-1.0..1.0))).collect();
    let g = (0..d.n_samples())
        .map(|i| {
            let t = d.angle(i);
            1.0 + coef.iter().map(|(m, a, b)| a * (m * t).cos() + b * (m * t).sin()).sum::<f64>()
        })
        .collect();
    PerturbationField::normal(g)
}

fn run_negbeta(spec: &ExperimentSpec) -> Result<Outcome> {
    let beta = spec.f64_or("beta", -1.0)?;
    let teeth: Vec<usize> = spec.list("teeth", &[4, 8, 16, 32])?;
    let rep = negbeta::negative_beta_demo(beta, spec.f64_or("amplitude", 0.1)?, &teeth, spec.usize_or("rings", 24)?)?;
    let mut csv = String::from("teeth,perimeter,hausdorff,lambda1,h_max\n");
    for l in &rep.levels {
        writeln!(csv, "{},{},{},{},{}", l.teeth, l.perimeter, l.hausdorff, l.lambda, l.mesh_h).ok();
    }
    let mut summary = format!("beta = {beta}: lambda1 strictly decreasing in perimeter: {}\n", rep.strictly_decreasing);
    let rejected = FlowConfig::new(0.1, 1.0, MetricKind::SobolevRadial, BoundaryCondition::Robin(beta)).validate();
    if let Err(e) = rejected {
        writeln!(summary, "flow engine: {e}").ok();
    }
    Ok(Outcome { status: pass_fail(rep.strictly_decreasing), summary, artifacts: vec![csv_artifact("negbeta.csv", csv)] })
}

fn run_verify(spec: &ExperimentSpec) -> Result<Outcome> {
    let report = verify::run_suite(spec.level()?)?;
    let mut summary = String::new();
    for c in &report.criteria {
        writeln!(summary, "{}", c.line()).ok();
    }
    Ok(Outcome {
        status: pass_fail(report.all_pass()),
        summary,
        artifacts: vec![Artifact { name: "verdict.json".into(), content: serde_json::to_string_pretty(&report)? }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_errors_carry_line_numbers() {
        let text = "command = eigen\n# comment\nshape = disk\nbogus line\n";
        match ExperimentSpec::parse_config(text, None) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let text = "command = eigen\nshape = disk\nmesh_h = fine\n";
        let spec = ExperimentSpec::parse_config(text, None).unwrap();
        match spec.validate() {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "command = eigen\nshape = disk\nh = 0.1\n";
        assert!(matches!(ExperimentSpec::parse_config(text, None), Err(Error::Config { line: 3, .. })));
    }

    #[test]
    fn overrides_replace_config_values() {
        let mut spec = ExperimentSpec::parse_config("shape = disk\nbc = robin\n", Some(Command::Eigen)).unwrap();
        spec.set("bc", "dirichlet").unwrap();
        assert_eq!(spec.bc().unwrap(), BoundaryCondition::Dirichlet);
        assert!(spec.set("command", "flow").is_err());
    }

    #[test]
    fn missing_parameters_are_reported_before_compute() {
        let spec = ExperimentSpec::new(Command::Gmm);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn flow_rejects_negative_beta() {
        let mut spec = ExperimentSpec::new(Command::Flow);
        spec.set("init", "disk").unwrap();
        spec.set("beta", "-1").unwrap();
        assert!(matches!(spec.validate(), Err(Error::NegativeBeta(_))));
    }

    #[test]
    fn eigen_disk_row() {
        let mut spec = ExperimentSpec::new(Command::Eigen);
        spec.set("shape", "disk").unwrap();
        spec.set("bc", "dirichlet").unwrap();
        let out = run(&spec).unwrap();
        let csv = &out.artifacts[0].content;
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "disk");
        let lam: f64 = row[4].parse().unwrap();
        assert!((lam - 5.783185962946784).abs() < 0.01 * 5.78);
        assert_eq!(out, run(&spec).unwrap());
    }
}
