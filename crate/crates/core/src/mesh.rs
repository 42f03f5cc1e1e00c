//! Mapped-disk triangulations of star-shaped domains.
//!
//! A ring triangulation of the unit disk is pushed forward by
//! `(r, θ) ↦ r η(θ) u(θ)`. The boundary ring sits at `θ_j = 2πj/n_b`, so
//! the boundary trace is uniformly parametrized in angle.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};
use crate::geometry::RadialDomain;

/// Topology of a mapped-disk mesh: ring count and boundary vertex count.
///
/// Keeping these fixed while the domain moves gives meshes with identical
/// connectivity, so discrete eigenvalues depend smoothly on the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshParams {
    pub rings: usize,
    pub boundary: usize,
}

impl MeshParams {
    /// Pick a topology for `domain` at edge length about `target_h`.
    ///
    /// The boundary count is a divisor of `N` or `N·2^e`, whichever is closest
    /// to `perimeter / target_h` on a log scale.
    pub fn choose(domain: &RadialDomain, target_h: f64) -> Result<Self> {
        if !(target_h > 0.0 && target_h.is_finite()) {
            return Err(invalid(format!("target_h = {target_h} must be positive")));
        }
        let n = domain.n_samples();
        let perimeter = domain.perimeter();
        let want = perimeter / target_h;
        let mut candidates: Vec<usize> = (8..=n).filter(|d| n % d == 0).collect();
        candidates.extend((1..8).map(|e| n << e));
        let boundary = candidates
            .into_iter()
            .min_by(|a, b| {
                let da = (*a as f64 / want).ln().abs();
                let db = (*b as f64 / want).ln().abs();
                da.total_cmp(&db)
            })
            .unwrap_or(n);
        let h = perimeter / boundary as f64;
        let rings = (2.0 * domain.mean_radius() / (3f64.sqrt() * h)).round() as usize;
        if rings < 3 {
            return Err(Error::TargetTooCoarse(target_h));
        }
        Ok(Self { rings, boundary })
    }

    /// Vertices on ring `k` (`1 <= k <= rings`).
    fn ring_size(&self, k: usize) -> usize {
        if k == self.rings {
            self.boundary
        } else {
            ((self.boundary * k) as f64 / self.rings as f64).round().max(3.0) as usize
        }
    }

    fn ring_offset(&self, k: usize) -> f64 {
        if (self.rings - k) % 2 == 1 {
            0.5
        } else {
            0.0
        }
    }
}

/// One edge of the boundary loop, oriented counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub normal: [f64; 2],
    /// Angle parameter of the edge midpoint.
    pub theta: f64,
}

/// Conforming triangulation with counterclockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Boundary vertex indices in counterclockwise order.
    pub boundary_loop: Vec<usize>,
    /// Angle parameter of each boundary vertex; uniform, starting at 0.
    pub boundary_theta: Vec<f64>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub h_max: f64,
}

/// Mesh `domain` at edge length about `target_h`.
pub fn triangulate(domain: &RadialDomain, target_h: f64) -> Result<TriMesh> {
    build(domain, MeshParams::choose(domain, target_h)?)
}

/// Mesh `domain` with a prescribed topology.
pub fn build(domain: &RadialDomain, params: MeshParams) -> Result<TriMesh> {
    if params.rings < 3 || params.boundary < 8 {
        return Err(invalid(format!("mesh topology {params:?} is too coarse")));
    }
    let n = domain.n_samples();
    let radius = |theta: f64, j: usize| -> f64 {
        // boundary angles that hit a sample use the stored value
        if n % params.boundary == 0 {
            domain.samples()[j * (n / params.boundary)]
        } else {
            domain.radius(theta)
        }
    };

    let mut vertices = vec![[0.0, 0.0]];
    let mut rings: Vec<(usize, usize, f64)> = Vec::with_capacity(params.rings);
    for k in 1..=params.rings {
        let m = params.ring_size(k);
        let off = params.ring_offset(k);
        let start = vertices.len();
        let s = k as f64 / params.rings as f64;
        for i in 0..m {
            let t = 2.0 * PI * (i as f64 + off) / m as f64;
            let r = if k == params.rings { radius(t, i) } else { s * domain.radius(t) };
            vertices.push([r * t.cos(), r * t.sin()]);
        }
        rings.push((start, m, off));
    }

    let mut triangles = Vec::new();
    let (s1, m1, _) = rings[0];
    for i in 0..m1 {
        triangles.push([0, s1 + i, s1 + (i + 1) % m1]);
    }
    for w in rings.windows(2) {
        zipper(w[0], w[1], &mut triangles);
    }

    let (sb, mb, _) = *rings.last().unwrap_or(&(0, 0, 0.0));
    let boundary_loop: Vec<usize> = (sb..sb + mb).collect();
    let boundary_theta: Vec<f64> = (0..mb).map(|j| 2.0 * PI * j as f64 / mb as f64).collect();
    let mesh = TriMesh::assemble_parts(vertices, triangles, boundary_loop, boundary_theta);
    // the ring topology is valid by construction; only orientation can fail
    mesh.check_orientation()?;
    Ok(mesh)
}

/// Stitch ring `a` (inner) to ring `b` (outer), advancing along whichever
/// side has the smaller next edge midpoint angle.
fn zipper(a: (usize, usize, f64), b: (usize, usize, f64), out: &mut Vec<[usize; 3]>) {
    let (sa, ma, oa) = a;
    let (sb, mb, ob) = b;
    let ang_a = |i: usize| 2.0 * PI * (i as f64 + oa) / ma as f64;
    let ang_b = |j: usize| 2.0 * PI * (j as f64 + ob) / mb as f64;
    let (mut i, mut j) = (0, 0);
    while i < ma || j < mb {
        let next_a = ang_a(i) + ang_a(i + 1);
        let next_b = ang_b(j) + ang_b(j + 1);
        if j < mb && (i == ma || next_b <= next_a) {
            out.push([sa + i % ma, sb + j % mb, sb + (j + 1) % mb]);
            j += 1;
        } else {
            out.push([sa + i % ma, sb + j % mb, sa + (i + 1) % ma]);
            i += 1;
        }
    }
}

impl TriMesh {
    fn assemble_parts(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_loop: Vec<usize>,
        boundary_theta: Vec<f64>,
    ) -> Self {
        let nb = boundary_loop.len();
        let boundary_edges = (0..nb)
            .map(|j| {
                let a = boundary_loop[j];
                let b = boundary_loop[(j + 1) % nb];
                let (p, q) = (vertices[a], vertices[b]);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                let len = dx.hypot(dy);
                BoundaryEdge {
                    a,
                    b,
                    normal: [dy / len, -dx / len],
                    theta: boundary_theta[j] + PI / nb as f64,
                }
            })
            .collect();
        let mut mesh = Self {
            vertices,
            triangles,
            boundary_loop,
            boundary_theta,
            boundary_edges,
            h_max: 0.0,
        };
        mesh.h_max = mesh
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| mesh.edge_length(a, b))
            .fold(0.0, f64::max);
        mesh
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Twice the signed area of triangle `t`.
    pub fn double_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (p, q, r) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    }

    pub fn area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| 0.5 * self.double_area(t)).sum()
    }

    fn edge_length(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.vertices[a], self.vertices[b]);
        (q[0] - p[0]).hypot(q[1] - p[1])
    }

    /// Each undirected edge once, in first-seen order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if seen.insert((a.min(b), a.max(b))) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle(&self) -> f64 {
        let mut best = f64::INFINITY;
        for t in &self.triangles {
            for k in 0..3 {
                let p = self.vertices[t[k]];
                let q = self.vertices[t[(k + 1) % 3]];
                let r = self.vertices[t[(k + 2) % 3]];
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [r[0] - p[0], r[1] - p[1]];
                let cross = u[0] * v[1] - u[1] * v[0];
                let dot = u[0] * v[0] + u[1] * v[1];
                best = best.min(cross.atan2(dot).to_degrees());
            }
        }
        best
    }

    fn check_orientation(&self) -> Result<()> {
        for t in 0..self.n_triangles() {
            let a = 0.5 * self.double_area(t);
            if !(a > 0.0) {
                return Err(Error::DegenerateTriangle { index: t, area: a });
            }
        }
        Ok(())
    }

    /// Check orientation and the boundary loop.
    pub fn validate(&self) -> Result<()> {
        self.check_orientation()?;
        let mut count: HashMap<(usize, usize), i32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let boundary = count.values().filter(|c| **c == 1).count();
        if boundary != self.boundary_loop.len() || count.values().any(|c| *c > 2) {
            return Err(invalid("boundary edges do not form a single loop"));
        }
        for e in &self.boundary_edges {
            if count.get(&(e.a.min(e.b), e.a.max(e.b))) != Some(&1) {
                return Err(invalid("boundary loop uses an interior edge"));
            }
        }
        Ok(())
    }

    pub fn is_boundary_vertex(&self) -> Vec<bool> {
        let mut flag = vec![false; self.n_vertices()];
        for &v in &self.boundary_loop {
            flag[v] = true;
        }
        flag
    }

    /// Regular 4-split; new boundary midpoints are projected onto `r = η(θ)`.
    pub fn refine(&self, domain: &RadialDomain) -> Result<TriMesh> {
        let mut vertices = self.vertices.clone();
        let nb = self.boundary_loop.len();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();

        let mut boundary_loop = Vec::with_capacity(2 * nb);
        let mut boundary_theta = Vec::with_capacity(2 * nb);
        for j in 0..nb {
            let (a, b) = (self.boundary_loop[j], self.boundary_loop[(j + 1) % nb]);
            let t = self.boundary_theta[j] + PI / nb as f64;
            let r = domain.radius(t);
            let idx = vertices.len();
            vertices.push([r * t.cos(), r * t.sin()]);
            mid.insert((a.min(b), a.max(b)), idx);
            boundary_loop.extend([a, idx]);
            boundary_theta.extend([self.boundary_theta[j], t]);
        }

        let mut triangles = Vec::with_capacity(4 * self.n_triangles());
        for t in &self.triangles {
            let mut m = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                m[k] = *mid.entry(key).or_insert_with(|| {
                    let (p, q) = (self.vertices[a], self.vertices[b]);
                    vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                    vertices.len() - 1
                });
            }
            triangles.push([t[0], m[0], m[2]]);
            triangles.push([m[0], t[1], m[1]]);
            triangles.push([m[2], m[1], t[2]]);
            triangles.push([m[0], m[1], m[2]]);
        }
        let mesh = TriMesh::assemble_parts(vertices, triangles, boundary_loop, boundary_theta);
        mesh.validate()?;
        Ok(mesh)
    }

    /// OFF text followed by a `BOUNDARY` section (`a b nx ny theta` per edge).
    pub fn to_off(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "OFF");
        let _ = writeln!(s, "{} {} 0", self.n_vertices(), self.n_triangles());
        for v in &self.vertices {
            let _ = writeln!(s, "{} {} 0", v[0], v[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "BOUNDARY {}", self.boundary_edges.len());
        for e in &self.boundary_edges {
            let _ = writeln!(s, "{} {} {} {} {}", e.a, e.b, e.normal[0], e.normal[1], e.theta);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perturbed(amp: f64) -> RadialDomain {
        let mut c = vec![0.0; 65];
        c[0] = 1.0;
        c[3] = amp;
        RadialDomain::from_fourier(c, 256).unwrap()
    }

    #[test]
    fn built_meshes_have_one_boundary_loop() {
        for target in [0.2, 0.1, 0.05, 0.03] {
            for d in [perturbed(0.1), perturbed(0.3)] {
                triangulate(&d, target).unwrap().validate().unwrap();
            }
        }
    }

    #[test]
    fn unit_disk_mesh_lies_in_disk() {
        let d = RadialDomain::ball(1.0, 256).unwrap();
        let m = triangulate(&d, 0.1).unwrap();
        m.validate().unwrap();
        assert!(m.vertices.iter().all(|p| p[0].hypot(p[1]) <= 1.0 + 1e-14));
        for &v in &m.boundary_loop {
            let p = m.vertices[v];
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
        assert!(m.min_angle() >= 20.0, "{}", m.min_angle());
    }

    #[test]
    fn too_coarse_target_is_rejected() {
        let d = RadialDomain::ball(1.0, 256).unwrap();
        assert!(matches!(triangulate(&d, 2.0), Err(Error::TargetTooCoarse(_))));
    }

    #[test]
    fn disk_area_converges_at_second_order() {
        let d = RadialDomain::ball(1.0, 256).unwrap();
        let m = triangulate(&d, 0.1).unwrap();
        let e0 = (m.area() - PI).abs();
        let r = m.refine(&d).unwrap();
        let e1 = (r.area() - PI).abs();
        // inscribed polygon deficit is (n/2) sin(2π/n) - π
        let nb = m.boundary_loop.len() as f64;
        assert!((m.area() - 0.5 * nb * (2.0 * PI / nb).sin()).abs() < 1e-12);
        assert!((e0 / e1 - 4.0).abs() < 0.05, "{e0} {e1}");
    }

    #[test]
    fn perturbed_area_within_h_squared() {
        let d = perturbed(0.1);
        let m = triangulate(&d, 0.05).unwrap();
        assert!((m.area() - 1.005 * PI).abs() < m.h_max * m.h_max);
        assert!(m.min_angle() >= 20.0);
    }

    #[test]
    fn refinement_bookkeeping() {
        let d = perturbed(0.1);
        let m = triangulate(&d, 0.1).unwrap();
        let r = m.refine(&d).unwrap();
        let edges = m.edges().len();
        assert_eq!(r.n_vertices(), m.n_vertices() + edges);
        assert_eq!(r.n_triangles(), 4 * m.n_triangles());
        for (&v, &t) in r.boundary_loop.iter().zip(&r.boundary_theta) {
            let p = r.vertices[v];
            assert!((p[0].hypot(p[1]) - d.radius(t)).abs() < 1e-12);
            assert!((p[1].atan2(p[0]).rem_euclid(2.0 * PI) - t).abs() < 1e-12);
        }
        assert!(r.h_max < 0.6 * m.h_max);
    }

    #[test]
    fn fixed_topology_follows_the_shape() {
        let a = perturbed(0.1);
        let b = perturbed(0.12);
        let p = MeshParams::choose(&a, 0.05).unwrap();
        let ma = build(&a, p).unwrap();
        let mb = build(&b, p).unwrap();
        assert_eq!(ma.triangles, mb.triangles);
        assert_ne!(ma.vertices, mb.vertices);
    }

    #[test]
    fn off_dump_is_deterministic() {
        let d = perturbed(0.1);
        let a = triangulate(&d, 0.2).unwrap().to_off();
        let b = triangulate(&d, 0.2).unwrap().to_off();
        assert_eq!(a, b);
        assert!(a.starts_with("OFF\n"));
        assert!(a.contains("BOUNDARY "));
    }
}
