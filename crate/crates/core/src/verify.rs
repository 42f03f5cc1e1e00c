//! The verification suite: fourteen numbered property checks, each
//! returning its measured quantities next to a verdict.
//!
//! `Level::Full` runs every check at its stated sample counts and meshes;
//! `Level::Quick` shrinks sample counts and horizons for a fast smoke run.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{self, ShapeKind};
use crate::eigen::{self, BoundaryCondition, SolveOptions};
use crate::error::{Error, Result};
use crate::experiment::{evi_test_points, random_field};
use crate::flow::{self, Flow, FlowConfig, SlackModel};
use crate::geometry::{distance, ConvexBody, MetricKind, RadialDomain, Shape};
use crate::mesh;
use crate::negbeta;
use crate::variation::{self, PerturbationField, VariationConfig, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

pub const COUNT: u32 = 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub measured: BTreeMap<String, f64>,
    pub note: String,
    pub seconds: f64,
}

impl CriterionResult {
    /// One `PASS`/`FAIL` line.
    pub fn line(&self) -> String {
        format!("[{}] {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, self.note)
    }

    /// A measured value by key; panics on unknown keys.
    pub fn get(&self, key: &str) -> f64 {
        match self.measured.get(key) {
            Some(v) => *v,
            None => panic!("criterion {} has no measurement '{key}'", self.id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub level: Level,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

pub fn run_suite(level: Level) -> Result<SuiteReport> {
    let criteria = (1..=COUNT).map(|id| criterion(id, level)).collect::<Result<_>>()?;
    Ok(SuiteReport { level, criteria })
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "eigensolver accuracy",
        2 => "homogeneity",
        3 => "Faber-Krahn",
        4 => "Robin to Dirichlet limit",
        5 => "first variation",
        6 => "Brunn-Minkowski",
        7 => "minimizing-movement step inequality",
        8 => "flow descent",
        9 => "contraction",
        10 => "discrete EVI",
        11 => "a priori estimate",
        12 => "alpha-convexity",
        13 => "second-variation bound",
        14 => "negative beta",
        _ => "unknown",
    }
}

/// Run one criterion.
pub fn criterion(id: u32, level: Level) -> Result<CriterionResult> {
    let clock = Instant::now();
    let mut m = Measured::default();
    let (pass, note) = match id {
        1 => eigen_accuracy(&mut m)?,
        2 => homogeneity(&mut m)?,
        3 => faber_krahn(level, &mut m)?,
        4 => robin_limit(&mut m)?,
        5 => first_variation(level, &mut m)?,
        6 => brunn_minkowski(level, &mut m)?,
        7 => step_inequality(level, &mut m)?,
        8 => flow_descent(level, &mut m)?,
        9 => contraction(level, &mut m)?,
        10 => evi(level, &mut m)?,
        11 => apriori(level, &mut m)?,
        12 => alpha_convexity(level, &mut m)?,
        13 => second_variation(level, &mut m)?,
        14 => negative_beta(&mut m)?,
        _ => return Err(crate::error::invalid(format!("no criterion {id}"))),
    };
    Ok(CriterionResult { id, name: name(id), pass, measured: m.0, note, seconds: clock.elapsed().as_secs_f64() })
}

#[derive(Default)]
struct Measured(BTreeMap<String, f64>);

impl Measured {
    fn set(&mut self, key: &str, v: f64) {
        self.0.insert(key.to_string(), v);
    }

    fn max(&mut self, key: &str, v: f64) {
        let e = self.0.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *e = e.max(v);
    }

    fn min(&mut self, key: &str, v: f64) {
        let e = self.0.entry(key.to_string()).or_insert(f64::INFINITY);
        *e = e.min(v);
    }

    fn get(&self, key: &str) -> f64 {
        self.0[key]
    }
}

fn slack(h: f64, mesh_h_rel: f64) -> f64 {
    SlackModel::CALIBRATED.value(h, mesh_h_rel)
}

/// Mesh at `factor · diameter`; returns `λ₁` and the relative mesh size.
fn lambda_rel(d: &RadialDomain, bc: BoundaryCondition, factor: f64) -> Result<(f64, f64)> {
    let diam = 2.0 * d.max_radius();
    let m = mesh::triangulate(d, factor * diam)?;
    let e = eigen::solve(&m, bc, SolveOptions::default())?;
    Ok((e.lambda1, m.h_max / diam))
}

const BCS: [BoundaryCondition; 4] = [
    BoundaryCondition::Dirichlet,
    BoundaryCondition::Robin(0.5),
    BoundaryCondition::Robin(1.0),
    BoundaryCondition::Robin(10.0),
];

fn eigen_accuracy(m: &mut Measured) -> Result<(bool, String)> {
    let disk = RadialDomain::ball(1.0, RadialDomain::DEFAULT_SAMPLES)?;
    let coarse = mesh::triangulate(&disk, 0.04)?;
    let fine = coarse.refine(&disk)?;
    for bc in BCS {
        let exact = eigen::disk_oracle(1.0, bc)?;
        for (key, mesh) in [("coarse", &coarse), ("refined", &fine)] {
            let clock = Instant::now();
            let e = eigen::solve(mesh, bc, SolveOptions::default())?;
            m.max("max_seconds", clock.elapsed().as_secs_f64());
            m.max(&format!("max_rel_err_{key}"), (e.lambda1 - exact).abs() / exact);
        }
    }
    let (c, r, t) = (m.get("max_rel_err_coarse"), m.get("max_rel_err_refined"), m.get("max_seconds"));
    Ok((c <= 0.01 && r <= 0.0025 && t < 2.0, format!("max rel err {c:.2e} at h=0.04, {r:.2e} refined, slowest solve {t:.2} s")))
}

fn homogeneity_shapes() -> Result<Vec<RadialDomain>> {
    ["disk", "ellipse(1.25,0.8)", "perturbed-ball(3,0.15)"]
        .iter()
        .map(|s| catalog::parse(s, ShapeKind::Radial)?.to_radial())
        .collect()
}

fn homogeneity(m: &mut Measured) -> Result<(bool, String)> {
    const FACTOR: f64 = 0.02;
    let mut pass = true;
    for d in homogeneity_shapes()? {
        let (l1, h) = lambda_rel(&d, BoundaryCondition::Dirichlet, FACTOR)?;
        let (l2, _) = lambda_rel(&d.scaled(2.0)?, BoundaryCondition::Dirichlet, FACTOR)?;
        let dev = (4.0 * l2 - l1).abs() / l1;
        m.max("max_dirichlet_dev", dev);
        m.max("mesh_slack", slack(0.0, h));
        pass &= dev <= 2.0 * slack(0.0, h);
        let (r1, _) = lambda_rel(&d, BoundaryCondition::Robin(1.0), FACTOR)?;
        for r in [1.5, 2.0] {
            let (rr, _) = lambda_rel(&d.scaled(r)?, BoundaryCondition::Robin(1.0), FACTOR)?;
            let excess = rr / (r1 / r) - 1.0;
            m.max("max_robin_excess", excess);
            pass &= excess <= slack(0.0, h);
        }
    }
    Ok((
        pass,
        format!(
            "Dirichlet deviation {:.2e} (2x slack {:.2e}), Robin relative excess {:.2e}",
            m.get("max_dirichlet_dev"),
            2.0 * m.get("mesh_slack"),
            m.get("max_robin_excess")
        ),
    ))
}

fn faber_krahn(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let n = level.pick(10, 50);
    let mut pass = true;
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Robin(1.0)] {
        let ball = eigen::disk_oracle(1.0, bc)?;
        let key = format!("min_ratio_{}", bc.name());
        for seed in 0..n {
            let d = catalog::random_radial(seed, 0.6)?;
            let (l, h) = lambda_rel(&d, bc, 0.02)?;
            m.min(&key, l / ball);
            m.max("mesh_slack", slack(0.0, h));
            pass &= l >= ball * (1.0 - 5.0 * slack(0.0, h));
        }
    }
    m.set("samples", n as f64);
    Ok((
        pass,
        format!(
            "{n} domains, min lambda/lambda(B1) = {:.4} (Dirichlet), {:.4} (Robin)",
            m.get("min_ratio_dirichlet"),
            m.get("min_ratio_robin")
        ),
    ))
}

fn robin_limit(m: &mut Measured) -> Result<(bool, String)> {
    let disk = RadialDomain::ball(1.0, RadialDomain::DEFAULT_SAMPLES)?;
    let mesh = mesh::triangulate(&disk, 0.04)?;
    let d = eigen::solve(&mesh, BoundaryCondition::Dirichlet, SolveOptions::default())?.lambda1;
    let r = eigen::solve(&mesh, BoundaryCondition::Robin(1e4), SolveOptions::default())?.lambda1;
    let rel = (r - d).abs() / d;
    m.set("rel_gap", rel);
    Ok((rel <= 0.02, format!("|lambda_R(1e4) - lambda_D| / lambda_D = {rel:.2e}")))
}

/// Seeded (domain, field) pairs for the variation checks.
pub fn variation_pairs(seed0: u64, count: usize) -> Result<Vec<(RadialDomain, PerturbationField)>> {
    (0..count as u64)
        .map(|i| {
            let d = catalog::random_radial(seed0 + i, 0.6)?;
            let f = random_field(&d, seed0 + 1000 + i);
            Ok((d, f))
        })
        .collect()
}

fn first_variation(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let n = level.pick(4, 20);
    let mut pass = true;
    for bc in [BoundaryCondition::Robin(1.0), BoundaryCondition::Dirichlet] {
        let cfg = VariationConfig::new(bc);
        let key = format!("max_rel_err_{}", bc.name());
        m.set(&key, 0.0);
        for (d, f) in variation_pairs(500, n)? {
            let bw = variation::first_variation(&d, &f, &cfg)?;
            let fd = variation::finite_diff_variation(&d, &f, &cfg, 1)?;
            let rel = (bw - fd).abs() / fd.abs();
            m.max(&key, rel);
            pass &= rel <= 1e-3;
        }
    }
    let disk = RadialDomain::ball(1.0, RadialDomain::DEFAULT_SAMPLES)?;
    let cfg = VariationConfig::new(BoundaryCondition::Dirichlet);
    let (lam, bw) = {
        let f = PerturbationField::dilation(disk.n_samples());
        let params = cfg.params(&disk)?;
        let mesh = mesh::build(&disk, params)?;
        let e = eigen::solve(&mesh, cfg.bc, SolveOptions::default())?;
        (e.lambda1, variation::first_variation(&disk, &f, &cfg)?)
    };
    let dil = (bw + 2.0 * lam).abs() / (2.0 * lam);
    m.set("dilation_rel_err", dil);
    pass &= dil <= 0.005;
    Ok((
        pass,
        format!(
            "{n} pairs: max rel err {:.2e} (Robin), {:.2e} (Dirichlet); dilation {:.2e}",
            m.get("max_rel_err_robin"),
            m.get("max_rel_err_dirichlet"),
            dil
        ),
    ))
}

fn brunn_minkowski(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let n = level.pick(3, 10);
    let ts: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let mut pass = true;
    for i in 0..n {
        let k0 = catalog::random_convex(100 + 2 * i)?;
        let k1 = catalog::random_convex(101 + 2 * i)?;
        let rep = variation::brunn_minkowski_check(&k0, &k1, &ts, BoundaryCondition::Dirichlet, 0.02, &SlackModel::CALIBRATED)?;
        for r in &rep.rows {
            m.min("min_strong_margin", r.strong_margin);
            m.min("min_weak_margin", r.weak_margin);
        }
        m.max("slack", rep.slack);
        pass &= rep.verdict == Verdict::Pass;
    }
    let n_s = RadialDomain::DEFAULT_SAMPLES;
    let b0 = ConvexBody::ball([0.0, 0.0], 1.0, n_s)?;
    let b1 = ConvexBody::ball([0.3, 0.1], 1.5, n_s)?;
    let rep = variation::brunn_minkowski_check(&b0, &b1, &ts, BoundaryCondition::Dirichlet, 0.02, &SlackModel::CALIBRATED)?;
    let ball_dev = rep.rows.iter().map(|r| r.strong_margin.abs()).fold(0.0, f64::max);
    m.set("ball_strong_dev", ball_dev);
    m.set("ball_slack", rep.slack);
    pass &= ball_dev <= rep.slack;
    let sq = ConvexBody::square(1.0, n_s)?;
    let rot = ConvexBody::rotated_square(1.0, n_s)?;
    let rep = variation::brunn_minkowski_check(&sq, &rot, &[0.5], BoundaryCondition::Dirichlet, 0.02, &SlackModel::CALIBRATED)?;
    m.set("square_strong_margin", rep.rows[0].strong_margin);
    pass &= rep.rows[0].strong_margin > 0.0;
    Ok((
        pass,
        format!(
            "{n} pairs: min strong {:.2e}, min weak {:.2e} (slack {:.2e}); balls {:.2e}; square/rotated margin {:.3e}",
            m.get("min_strong_margin"),
            m.get("min_weak_margin"),
            m.get("slack"),
            ball_dev,
            m.get("square_strong_margin")
        ),
    ))
}

fn robin_sobolev(h: f64, horizon: f64) -> FlowConfig {
    FlowConfig::new(h, horizon, MetricKind::SobolevRadial, BoundaryCondition::Robin(1.0)).with_volume(PI)
}

fn convex_l2(h: f64, horizon: f64) -> FlowConfig {
    FlowConfig::new(h, horizon, MetricKind::LpSupport { p: 2.0 }, BoundaryCondition::Dirichlet)
}

fn step_inequality(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let horizon = level.pick(0.2, 0.5);
    let radial: Shape = RadialDomain::perturbed_ball(1.0, 2, 0.3)?.into();
    let convex: Shape = catalog::random_convex(1)?.into();
    let runs = [(radial, robin_sobolev(0.05, horizon)), (convex, convex_l2(0.1, horizon))];
    let mut steps = 0;
    for (u0, cfg) in runs {
        let traj = flow::run_flow(&u0, &cfg)?;
        steps += traj.steps();
        for margin in traj.step_margins() {
            m.min("min_step_margin", margin);
        }
        m.min("min_telescoping_margin", traj.telescoping_margin());
    }
    let (s, t) = (m.get("min_step_margin"), m.get("min_telescoping_margin"));
    Ok((s >= -1e-10 && t >= -1e-10, format!("{steps} logged steps: min step margin {s:.2e}, telescoping margin {t:.2e}")))
}

/// Trajectory and `d_char` ratio for the descent run.
pub fn descent_run(h: f64, horizon: f64) -> Result<(flow::FlowTrajectory, f64)> {
    let u0: Shape = RadialDomain::perturbed_ball(1.0, 2, 0.3)?.into();
    let traj = flow::run_flow(&u0, &robin_sobolev(h, horizon))?;
    let ball: Shape = RadialDomain::ball(1.0, RadialDomain::DEFAULT_SAMPLES)?.into();
    let ch = MetricKind::Char { container: 4.0 };
    let d0 = distance(&traj.shapes[0], &ball, &ch)?;
    let d1 = distance(traj.shapes.last().unwrap_or(&u0), &ball, &ch)?;
    Ok((traj, d1 / d0))
}

fn flow_descent(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let h = level.pick(0.1, 0.05);
    let (traj, ratio) = descent_run(h, 2.0)?;
    let monotone = traj.is_nonincreasing(0.0);
    m.set("d_char_ratio", ratio);
    m.set("monotone", monotone as u8 as f64);
    m.set("stagnated", traj.stagnated.iter().filter(|s| **s).count() as f64);
    m.set("lambda_initial", traj.phi_values[0]);
    m.set("lambda_final", *traj.phi_values.last().unwrap_or(&f64::NAN));
    Ok((
        monotone && ratio <= 0.25,
        format!("h={h}, T=2: monotone {monotone}, final/initial d_char = {ratio:.4} (required <= 0.25)"),
    ))
}

fn contraction(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let horizon = level.pick(0.3, 1.0);
    let u0: Shape = catalog::random_convex(1)?.into();
    let v0: Shape = catalog::random_convex(2)?.into();
    let rep = flow::contraction_check(&u0, &v0, &convex_l2(0.1, horizon), 0.0, &SlackModel::CALIBRATED)?;
    m.set("initial", rep.initial);
    m.set("final", rep.samples.last().map_or(f64::NAN, |s| s.1));
    m.set("max_excess", rep.max_excess);
    m.set("slack", rep.slack);
    Ok((
        rep.pass,
        format!(
            "d {:.4} -> {:.4} over t <= {horizon}; max excess {:.2e}, slack {:.2e}",
            rep.initial,
            m.get("final"),
            rep.max_excess,
            rep.slack
        ),
    ))
}

fn evi(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let horizon = level.pick(0.2, 0.5);
    let u0: Shape = catalog::random_convex(1)?.into();
    let points = evi_test_points(&u0, 5, 7)?;
    let mut pass = true;
    for h in [0.1, 0.05] {
        let flow = Flow::new(&u0, convex_l2(h, horizon))?;
        let traj = flow.run(&u0)?;
        let key = format!("max_positive_h{h}");
        m.set(&key, 0.0);
        for z in &points {
            let rep = flow::evi_residual(&traj, z, 0.0, &flow, &SlackModel::CALIBRATED)?;
            m.max(&key, rep.max_positive);
            m.max(&format!("max_residual_h{h}"), rep.residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            m.min(&format!("bound_h{h}"), rep.bound);
            pass &= rep.pass;
        }
    }
    Ok((
        pass,
        format!(
            "5 points: max positive residual {:.2e} (h=0.1, bound {:.2e}), {:.2e} (h=0.05, bound {:.2e})",
            m.get("max_positive_h0.1"),
            m.get("bound_h0.1"),
            m.get("max_positive_h0.05"),
            m.get("bound_h0.05")
        ),
    ))
}

fn apriori(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let ns: Vec<usize> = level.pick(vec![2, 4, 16], vec![4, 8, 16, 64]);
    let u0 = catalog::parse("ellipse(1.5,0.7)", ShapeKind::Convex)?;
    let rows = flow::apriori_check(&u0, 1.0, &ns, &convex_l2(0.25, 1.0), &SlackModel::CALIBRATED)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for r in &rows {
        m.set(&format!("lhs_n{}", r.n), r.lhs);
        m.set(&format!("rhs_n{}", r.n), r.rhs);
        m.set(&format!("slack_n{}", r.n), r.slack);
        pass &= r.pass;
        parts.push(format!("n={}: {:.2e} <= {:.2e}", r.n, r.lhs, r.rhs + r.slack));
    }
    Ok((pass, format!("reference n={}; {}", ns.iter().max().unwrap_or(&0), parts.join(", "))))
}

/// Seeded pairs of admissible radial domains for the convexity check.
pub fn convexity_pairs(count: usize) -> Result<Vec<(RadialDomain, RadialDomain)>> {
    (0..count as u64)
        .map(|i| {
            // amplitudes grow along the sample, moving pairs toward the constraint boundary
            let amp = 0.3 + 0.6 * i as f64 / count.max(2) as f64;
            Ok((catalog::random_radial(200 + 2 * i, amp)?, catalog::random_radial(201 + 2 * i, amp)?))
        })
        .collect()
}

fn alpha_convexity(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let n = level.pick(3, 10);
    let cfg = VariationConfig { mesh_factor: 0.02, ..VariationConfig::new(BoundaryCondition::Robin(1.0)) };
    let pairs = convexity_pairs(n)?;
    let mut reports = Vec::new();
    for (a, b) in &pairs {
        let rep = variation::alpha_convexity_check(a, b, 11, &cfg)?;
        m.min("alpha_min", rep.alpha_estimate);
        m.max("alpha_max", rep.alpha_estimate);
        reports.push(rep);
    }
    let alpha = m.get("alpha_min");
    let t21: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
    let mut pass = alpha.is_finite();
    for ((a, b), rep) in pairs.iter().zip(&reports) {
        let params = cfg.params(a)?;
        let values = variation::path_values(a, b, cfg.bc, params, &t21)?;
        let scale = values.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        let margins = variation::chord_margins(&t21, &values, alpha, rep.distance);
        let worst = margins.iter().copied().fold(f64::INFINITY, f64::min) / scale;
        let mesh_h = mesh::build(a, params)?.h_max / (2.0 * a.max_radius());
        m.min("min_rel_margin", worst);
        m.max("slack", slack(0.0, mesh_h));
        pass &= worst >= -slack(0.0, mesh_h);
    }
    m.set("samples", n as f64);
    Ok((
        pass,
        format!(
            "{n} pairs: alpha in [{:.4}, {:.4}]; 21-point chord margin {:.2e} (slack {:.2e})",
            alpha,
            m.get("alpha_max"),
            m.get("min_rel_margin"),
            m.get("slack")
        ),
    ))
}

fn second_variation(level: Level, m: &mut Measured) -> Result<(bool, String)> {
    let n = level.pick(6, 30);
    let cfg = VariationConfig { mesh_factor: 0.02, ..VariationConfig::new(BoundaryCondition::Robin(1.0)) };
    let pairs = variation_pairs(300, n)?;
    let doubled: Vec<_> = pairs.iter().map(|(d, f)| (d.clone(), f.scaled(2.0))).collect();
    let a = variation::second_variation_bound(&pairs, &cfg)?;
    let b = variation::second_variation_bound(&doubled, &cfg)?;
    let invariance = a.samples.iter().zip(&b.samples).map(|(x, y)| (x.ratio - y.ratio).abs() / x.ratio).fold(0.0, f64::max);
    m.set("max_ratio", a.max_ratio);
    m.set("doubling_dev", invariance);
    let pass = a.pass && a.max_ratio.is_finite() && invariance <= 1e-6;
    Ok((pass, format!("{n} pairs: max ratio {:.4}, doubling deviation {invariance:.2e}", a.max_ratio)))
}

fn negative_beta(m: &mut Measured) -> Result<(bool, String)> {
    let rep = negbeta::negative_beta_demo(-1.0, 0.1, &[4, 8, 16, 32], 24)?;
    let rejected = matches!(
        FlowConfig::new(0.1, 1.0, MetricKind::SobolevRadial, BoundaryCondition::Robin(-1.0)).validate(),
        Err(Error::NegativeBeta(_))
    );
    m.set("levels", rep.levels.len() as f64);
    m.set("strictly_decreasing", rep.strictly_decreasing as u8 as f64);
    m.set("flow_rejects", rejected as u8 as f64);
    m.set("hausdorff_spread", {
        let hs: Vec<f64> = rep.levels.iter().map(|l| l.hausdorff).collect();
        hs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - hs.iter().copied().fold(f64::INFINITY, f64::min)
    });
    let lams: Vec<String> = rep.levels.iter().map(|l| format!("{:.4}", l.lambda)).collect();
    Ok((
        rep.strictly_decreasing && rejected && rep.levels.len() >= 4,
        format!("lambda = [{}] over teeth 4..32; flow rejects beta<0: {rejected}", lams.join(", ")),
    ))
}
