//! P1 finite elements for the first Laplace eigenvalues, and a radial
//! shooting oracle for disks.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::mesh::TriMesh;
use crate::sparse::{symmetric_eigen, Csr, Skyline};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin(f64),
}

impl BoundaryCondition {
    pub fn robin(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(invalid(format!("Robin parameter {beta} is not finite")));
        }
        Ok(Self::Robin(beta))
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            Self::Dirichlet => None,
            Self::Robin(b) => Some(*b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Robin(_) => "robin",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dirichlet => write!(f, "dirichlet"),
            Self::Robin(b) => write!(f, "robin(beta={b})"),
        }
    }
}

/// Global P1 matrices of a mesh.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub stiffness: Csr,
    pub mass: Csr,
    pub boundary_mass: Csr,
    /// Vertices not on the boundary loop, ascending.
    pub interior: Vec<usize>,
}

/// `(1/4A)(b_i b_j + c_i c_j)` for the triangle `p`.
pub fn element_stiffness(p: [[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
    let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
    let area = 0.5 * (b[0] * c[1] - b[1] * c[0]);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        }
    }
    k
}

pub fn assemble(mesh: &TriMesh) -> Result<Assembly> {
    let n = mesh.n_vertices();
    let mut kt = Vec::with_capacity(9 * mesh.n_triangles());
    let mut mt = Vec::with_capacity(9 * mesh.n_triangles());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = 0.5 * mesh.double_area(t);
        if !(area > 0.0) {
            return Err(Error::DegenerateTriangle { index: t, area });
        }
        let ke = element_stiffness([mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]]);
        for i in 0..3 {
            for j in 0..3 {
                kt.push((tri[i], tri[j], ke[i][j]));
                let m = if i == j { area / 6.0 } else { area / 12.0 };
                mt.push((tri[i], tri[j], m));
            }
        }
    }
    let mut bt = Vec::with_capacity(4 * mesh.boundary_edges.len());
    for e in &mesh.boundary_edges {
        let (p, q) = (mesh.vertices[e.a], mesh.vertices[e.b]);
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        bt.extend([
            (e.a, e.a, len / 3.0),
            (e.b, e.b, len / 3.0),
            (e.a, e.b, len / 6.0),
            (e.b, e.a, len / 6.0),
        ]);
    }
    let on_boundary = mesh.is_boundary_vertex();
    Ok(Assembly {
        stiffness: Csr::from_triplets(n, kt),
        mass: Csr::from_triplets(n, mt),
        boundary_mass: Csr::from_triplets(n, bt),
        interior: (0..n).filter(|&i| !on_boundary[i]).collect(),
    })
}

impl Assembly {
    /// Operator and mass on the trial space of `bc`.
    fn system(&self, bc: BoundaryCondition) -> (Csr, Csr) {
        match bc {
            BoundaryCondition::Dirichlet => (self.stiffness.restrict(&self.interior), self.mass.restrict(&self.interior)),
            BoundaryCondition::Robin(b) => (self.stiffness.add_scaled(b, &self.boundary_mass), self.mass.clone()),
        }
    }

    fn embed(&self, bc: BoundaryCondition, x: &[f64]) -> Vec<f64> {
        match bc {
            BoundaryCondition::Robin(_) => x.to_vec(),
            BoundaryCondition::Dirichlet => {
                let mut u = vec![0.0; self.mass.n];
                for (k, &i) in self.interior.iter().enumerate() {
                    u[i] = x[k];
                }
                u
            }
        }
    }

    /// `(uᵀKu + β uᵀBu) / uᵀMu`; for Dirichlet the boundary values of `u`
    /// are dropped (the quotient of its projection onto the trial space).
    pub fn rayleigh(&self, u: &[f64], bc: BoundaryCondition) -> Result<f64> {
        let mut v = u.to_vec();
        if bc == BoundaryCondition::Dirichlet {
            let mut keep = vec![false; v.len()];
            for &i in &self.interior {
                keep[i] = true;
            }
            for (x, k) in v.iter_mut().zip(keep) {
                if !k {
                    *x = 0.0;
                }
            }
        }
        let m = self.mass.form(&v, &v);
        if !(m > 0.0) {
            return Err(Error::ZeroVector);
        }
        let mut a = self.stiffness.form(&v, &v);
        if let Some(b) = bc.beta() {
            a += b * self.boundary_mass.form(&v, &v);
        }
        Ok(a / m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Number of eigenpairs wanted (1 or 2).
    pub k: usize,
    /// Rough value of λ₁ (e.g. from the previous flow step); the shift is
    /// placed just below it.
    pub shift_hint: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { k: 1, shift_hint: None, tol: 1e-10, max_iter: 500 }
    }
}

impl SolveOptions {
    pub fn pairs(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda1: f64,
    pub lambda2: Option<f64>,
    /// First eigenfunction, nodal values, `∫u² = 1`, `∫u > 0`.
    pub u: Vec<f64>,
    pub u2: Option<Vec<f64>>,
    /// Largest `‖Au − λMu‖ / ‖Mu‖` over the returned pairs.
    pub residual: f64,
    pub mesh_h: f64,
    pub iterations: usize,
}

pub fn solve(mesh: &TriMesh, bc: BoundaryCondition, opts: SolveOptions) -> Result<EigenResult> {
    let asm = assemble(mesh)?;
    solve_assembled(&asm, mesh, bc, opts)
}

/// Shift-invert subspace iteration with Rayleigh–Ritz.
pub fn solve_assembled(asm: &Assembly, mesh: &TriMesh, bc: BoundaryCondition, opts: SolveOptions) -> Result<EigenResult> {
    if !(1..=2).contains(&opts.k) {
        return Err(invalid(format!("k = {} but only 1 or 2 eigenpairs are supported", opts.k)));
    }
    let (a, m) = system_of(asm, bc);
    let n = a.n;
    let p = (opts.k + 3).min(n);
    if n < p {
        return Err(invalid("mesh has too few unknowns"));
    }

    let mut q = start_block(asm, mesh, bc, p);
    let (mut shift, mut fact) = first_factor(&a, &m, bc, opts.shift_hint)?;
    let mut reshifted = opts.shift_hint.is_some();
    let mut last_res = f64::INFINITY;
    let mut theta = vec![0.0; p];
    for it in 1..=opts.max_iter {
        let z: Vec<Vec<f64>> = q.iter().map(|x| fact.solve(&m.mul_vec(x))).collect();
        let (vals, vecs) = ritz(&a, &m, &z)?;
        theta = vals;
        q = vecs;
        let res: Vec<f64> = (0..opts.k).map(|c| residual(&a, &m, &q[c], theta[c])).collect();
        last_res = res.iter().copied().fold(0.0, f64::max);
        if last_res <= opts.tol {
            return Ok(finish(asm, &m, bc, &q, &theta, opts.k, last_res, mesh.h_max, it));
        }
        if !reshifted && last_res < 1e-2 * theta[0].abs().max(1.0) {
            // move the shift close below λ₁ once a rough value is known
            reshifted = true;
            let gap = theta[p - 1] - theta[0];
            let s = theta[0] - 0.05 * (theta[0].abs() + gap);
            if s > shift {
                if let Some(f) = Skyline::factor(&a.add_scaled(-s, &m)) {
                    shift = s;
                    fact = f;
                }
            }
        }
    }
    let _ = theta;
    Err(Error::IterationDivergence { iterations: opts.max_iter, residual: last_res })
}

fn system_of(asm: &Assembly, bc: BoundaryCondition) -> (Csr, Csr) {
    asm.system(bc)
}

fn first_factor(a: &Csr, m: &Csr, bc: BoundaryCondition, hint: Option<f64>) -> Result<(f64, Skyline)> {
    let mut tries: Vec<f64> = Vec::new();
    if let Some(h) = hint {
        tries.push(h - 0.1 * h.abs());
    }
    if bc.beta().map_or(true, |b| b >= 0.0) {
        tries.push(0.0);
    }
    let mut s = -1.0;
    while s > -1e8 {
        tries.push(s);
        s *= 4.0;
    }
    for s in tries {
        if let Some(f) = Skyline::factor(&a.add_scaled(-s, m)) {
            return Ok((s, f));
        }
    }
    Err(invalid("no shift below the spectrum could be factored"))
}

/// Deterministic starting block: constants, coordinates, a mixed monomial
/// and a scrambled vector.
fn start_block(asm: &Assembly, mesh: &TriMesh, bc: BoundaryCondition, p: usize) -> Vec<Vec<f64>> {
    let idx: Vec<usize> = match bc {
        BoundaryCondition::Dirichlet => asm.interior.clone(),
        BoundaryCondition::Robin(_) => (0..mesh.n_vertices()).collect(),
    };
    let f: [&dyn Fn(usize, [f64; 2]) -> f64; 5] = [
        &|_, _| 1.0,
        &|_, x| x[0],
        &|_, x| x[1],
        &|_, x| x[0] * x[1],
        &|i, _| ((i as f64 * 12.9898).sin() * 43758.5453).fract(),
    ];
    f.iter()
        .take(p)
        .map(|g| idx.iter().map(|&i| g(i, mesh.vertices[i])).collect())
        .collect()
}

/// Rayleigh–Ritz on span(z): M-orthonormal Ritz vectors, values ascending.
fn ritz(a: &Csr, m: &Csr, z: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let p = z.len();
    let az: Vec<Vec<f64>> = z.iter().map(|x| a.mul_vec(x)).collect();
    let mz: Vec<Vec<f64>> = z.iter().map(|x| m.mul_vec(x)).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    let ka: Vec<Vec<f64>> = (0..p).map(|i| (0..p).map(|j| 0.5 * (dot(&z[i], &az[j]) + dot(&z[j], &az[i]))).collect()).collect();
    let ma: Vec<Vec<f64>> = (0..p).map(|i| (0..p).map(|j| 0.5 * (dot(&z[i], &mz[j]) + dot(&z[j], &mz[i]))).collect()).collect();
    // M-orthonormalize through the eigenbasis of the Gram matrix
    let (gv, gw) = symmetric_eigen(&ma);
    let top = gv.last().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..p).filter(|&c| gv[c] > 1e-13 * top).collect();
    if keep.is_empty() {
        return Err(Error::ZeroVector);
    }
    let r = keep.len();
    // W = G V D^{-1/2}
    let w: Vec<Vec<f64>> = (0..p).map(|i| keep.iter().map(|&c| gw[i][c] / gv[c].sqrt()).collect()).collect();
    let kr: Vec<Vec<f64>> = (0..r)
        .map(|x| {
            (0..r)
                .map(|y| (0..p).map(|i| (0..p).map(|j| w[i][x] * ka[i][j] * w[j][y]).sum::<f64>()).sum())
                .collect()
        })
        .collect();
    let (vals, vecs) = symmetric_eigen(&kr);
    let n = z[0].len();
    let mut out = Vec::with_capacity(r);
    for c in 0..r {
        let mut x = vec![0.0; n];
        for i in 0..p {
            let coef: f64 = (0..r).map(|y| w[i][y] * vecs[y][c]).sum();
            if coef != 0.0 {
                for (xv, zv) in x.iter_mut().zip(&z[i]) {
                    *xv += coef * zv;
                }
            }
        }
        out.push(x);
    }
    Ok((vals, out))
}

fn residual(a: &Csr, m: &Csr, x: &[f64], lambda: f64) -> f64 {
    let ax = a.mul_vec(x);
    let mx = m.mul_vec(x);
    let num: f64 = ax.iter().zip(&mx).map(|(p, q)| (p - lambda * q).powi(2)).sum::<f64>().sqrt();
    let den: f64 = mx.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den
}

#[allow(clippy::too_many_arguments)]
fn finish(
    asm: &Assembly,
    m: &Csr,
    bc: BoundaryCondition,
    q: &[Vec<f64>],
    theta: &[f64],
    k: usize,
    res: f64,
    mesh_h: f64,
    iterations: usize,
) -> EigenResult {
    let normalize = |x: &[f64]| -> Vec<f64> {
        let norm = m.form(x, x).sqrt();
        let s: f64 = m.mul_vec(x).iter().sum();
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        asm.embed(bc, &x.iter().map(|v| sign * v / norm).collect::<Vec<_>>())
    };
    EigenResult {
        lambda1: theta[0],
        lambda2: (k > 1).then(|| theta[1]),
        u: normalize(&q[0]),
        u2: (k > 1).then(|| normalize(&q[1])),
        residual: res,
        mesh_h,
        iterations,
    }
}

/// λ₁ of the disk of radius `r` by shooting on `u'' + u'/r + λu = 0`.
///
/// RK4 from a series start at `r = 1e-3 R`; the first sign change of the
/// boundary residual in `[1e-6, 400/R²]` is bisected to full precision.
/// For `β < 0` the scan starts at `-4(|β| + 1/R)²`, below the (negative)
/// first eigenvalue.
pub fn disk_oracle(radius: f64, bc: BoundaryCondition) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(invalid(format!("radius {radius} must be positive")));
    }
    let f = |lambda: f64| {
        let (u, du) = shoot(radius, lambda, 20_000);
        match bc {
            BoundaryCondition::Dirichlet => u,
            BoundaryCondition::Robin(b) => du + b * u,
        }
    };
    let hi = 400.0 / (radius * radius);
    let lo = match bc.beta() {
        Some(b) if b < 0.0 => -4.0 * (b.abs() + 1.0 / radius).powi(2),
        _ => 1e-6 / (radius * radius),
    };
    let steps = 400;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=steps {
        let b = lo + (hi - lo) * i as f64 / steps as f64;
        let fb = f(b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                if mid <= x0 || mid >= x1 {
                    break;
                }
                let fm = f(mid);
                if fm.signum() == f0.signum() {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            return Ok(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    Err(Error::BracketFailure { lo, hi })
}

/// `(u(R), u'(R))` for the regular radial solution with `u(0) = 1`.
fn shoot(radius: f64, lambda: f64, steps: usize) -> (f64, f64) {
    let r0 = 1e-3 * radius;
    let l = lambda;
    let mut u = 1.0 - l * r0 * r0 / 4.0 + l * l * r0.powi(4) / 64.0;
    let mut v = -l * r0 / 2.0 + l * l * r0.powi(3) / 16.0;
    let h = (radius - r0) / steps as f64;
    let rhs = |r: f64, u: f64, v: f64| (v, -v / r - l * u);
    let mut r = r0;
    for _ in 0..steps {
        let (k1u, k1v) = rhs(r, u, v);
        let (k2u, k2v) = rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = rhs(r + h, u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += h;
    }
    (u, v)
}

/// `λ_D` of the disk of radius `r` from the classical constant `j₀,₁`.
pub fn disk_dirichlet_exact(radius: f64) -> f64 {
    const J01: f64 = 2.404_825_557_695_773;
    J01 * J01 / (radius * radius)
}

/// Area-normalized constant used by checks: `λ_D(B) |B|`.
pub fn faber_krahn_constant() -> f64 {
    disk_dirichlet_exact(1.0) * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialDomain;
    use crate::mesh::triangulate;

    /// `J₀` and `J₁` by their power series (independent of the ODE).
    fn j0(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..80 {
            term *= -(x * x / 4.0) / (m * m) as f64;
            sum += term;
        }
        sum
    }

    fn j1(x: f64) -> f64 {
        let mut term = x / 2.0;
        let mut sum = term;
        for m in 1..80 {
            term *= -(x * x / 4.0) / (m * (m + 1)) as f64;
            sum += term;
        }
        sum
    }

    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let fa = f(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn reference_triangle_stiffness() {
        let k = element_stiffness([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let want = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn assembly_identities() {
        let d = RadialDomain::perturbed_ball(1.0, 3, 0.1).unwrap();
        let m = triangulate(&d, 0.1).unwrap();
        let a = assemble(&m).unwrap();
        assert!(a.stiffness.row_sums().iter().all(|s| s.abs() < 1e-12));
        let total: f64 = a.mass.val.iter().sum();
        assert!((total - m.area()).abs() < 1e-12);
        let edge_total: f64 = a.boundary_mass.val.iter().sum();
        let perim: f64 = m
            .boundary_edges
            .iter()
            .map(|e| {
                let (p, q) = (m.vertices[e.a], m.vertices[e.b]);
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .sum();
        assert!((edge_total - perim).abs() < 1e-12);
        let ones = vec![1.0; m.n_vertices()];
        let rq = a.rayleigh(&ones, BoundaryCondition::Robin(2.0)).unwrap();
        assert!((rq - 2.0 * perim / m.area()).abs() < 1e-12);
        assert!(matches!(a.rayleigh(&vec![0.0; m.n_vertices()], BoundaryCondition::Robin(1.0)), Err(Error::ZeroVector)));
    }

    #[test]
    fn oracle_matches_series_zero() {
        let j01 = bisect(j0, 2.0, 3.0);
        assert!((j01 - 2.404_825_557_695_773).abs() < 1e-14);
        let l = disk_oracle(1.0, BoundaryCondition::Dirichlet).unwrap();
        assert!((l - j01 * j01).abs() < 1e-9, "{l}");
        let l2 = disk_oracle(2.0, BoundaryCondition::Dirichlet).unwrap();
        assert!((l2 - j01 * j01 / 4.0).abs() < 1e-9);
    }

    #[test]
    fn oracle_matches_robin_series_root() {
        for beta in [0.5, 1.0, 10.0] {
            let x = bisect(|x| x * j1(x) - beta * j0(x), 1e-3, 2.404);
            let l = disk_oracle(1.0, BoundaryCondition::Robin(beta)).unwrap();
            assert!((l - x * x).abs() < 1e-9, "beta {beta}: {l} vs {}", x * x);
        }
        let big = disk_oracle(1.0, BoundaryCondition::Robin(1e4)).unwrap();
        assert!((big - disk_dirichlet_exact(1.0)).abs() < 2e-3 * big);
    }

    #[test]
    fn oracle_handles_negative_beta() {
        // for λ = -μ² the residual is μ I₁(μ) + β I₀(μ)
        let i0 = |x: f64| j0_imag(x, 0);
        let i1 = |x: f64| j0_imag(x, 1);
        let mu = bisect(|x| x * i1(x) - i0(x), 0.1, 10.0);
        let l = disk_oracle(1.0, BoundaryCondition::Robin(-1.0)).unwrap();
        assert!((l + mu * mu).abs() < 1e-9, "{l} vs {}", -mu * mu);
        assert!(disk_oracle(-1.0, BoundaryCondition::Dirichlet).is_err());
    }

    /// Modified Bessel `I_ν` (ν = 0, 1) by series.
    fn j0_imag(x: f64, nu: i32) -> f64 {
        let mut term = if nu == 0 { 1.0 } else { x / 2.0 };
        let mut sum = term;
        for m in 1..80 {
            term *= (x * x / 4.0) / (m * (m + nu)) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn fem_disk_dirichlet_and_residual() {
        let d = RadialDomain::ball(1.0, 256).unwrap();
        let m = triangulate(&d, 0.08).unwrap();
        let r = solve(&m, BoundaryCondition::Dirichlet, SolveOptions::pairs(2)).unwrap();
        let exact = disk_dirichlet_exact(1.0);
        assert!((r.lambda1 - exact).abs() < 0.02 * exact, "{}", r.lambda1);
        assert!(r.residual <= 1e-10);
        let j11 = 3.831_705_970_207_512;
        assert!((r.lambda2.unwrap() - j11 * j11).abs() < 0.03 * j11 * j11);
        assert!(r.u.iter().all(|x| *x >= -1e-8));
        let a = assemble(&m).unwrap();
        assert!((a.rayleigh(&r.u, BoundaryCondition::Dirichlet).unwrap() - r.lambda1).abs() < 1e-9);
        assert!((a.mass.form(&r.u, &r.u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn warm_shift_gives_same_answer() {
        let d = RadialDomain::perturbed_ball(1.0, 2, 0.2).unwrap();
        let m = triangulate(&d, 0.08).unwrap();
        let bc = BoundaryCondition::Robin(1.0);
        let cold = solve(&m, bc, SolveOptions::default()).unwrap();
        let warm = solve(&m, bc, SolveOptions { shift_hint: Some(cold.lambda1 * 1.05), ..SolveOptions::default() }).unwrap();
        assert!((cold.lambda1 - warm.lambda1).abs() < 1e-10);
    }

    #[test]
    fn negative_beta_solves_below_zero() {
        let d = RadialDomain::ball(1.0, 256).unwrap();
        let m = triangulate(&d, 0.1).unwrap();
        let r = solve(&m, BoundaryCondition::Robin(-1.0), SolveOptions::default()).unwrap();
        let oracle = disk_oracle(1.0, BoundaryCondition::Robin(-1.0)).unwrap();
        assert!((r.lambda1 - oracle).abs() < 0.02 * oracle.abs(), "{} vs {oracle}", r.lambda1);
        assert!(r.residual <= 1e-10);
    }
}
