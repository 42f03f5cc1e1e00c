//! Symmetric sparse matrices and a profile (skyline) Cholesky factorization.

/// Compressed sparse row matrix; symmetric matrices store both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Sum duplicate `(i, j, v)` entries.
    pub fn from_triplets(n: usize, t: Vec<(usize, usize, f64)>) -> Self {
        // bucket by row, then sort each (short) row by column
        let mut start = vec![0usize; n + 1];
        for &(i, _, _) in &t {
            start[i + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut buf = vec![(0usize, 0.0f64); t.len()];
        for (i, j, v) in t {
            buf[fill[i]] = (j, v);
            fill[i] += 1;
        }
        let mut row_ptr = vec![0; n + 1];
        let mut col = Vec::with_capacity(buf.len());
        let mut val: Vec<f64> = Vec::with_capacity(buf.len());
        for i in 0..n {
            let seg = &mut buf[start[i]..start[i + 1]];
            seg.sort_by_key(|e| e.0);
            let mut last = usize::MAX;
            for &(j, v) in seg.iter() {
                if j == last {
                    *val.last_mut().unwrap() += v;
                } else {
                    col.push(j);
                    val.push(v);
                    last = j;
                }
            }
            row_ptr[i + 1] = col.len();
        }
        Self { n, row_ptr, col, val }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, row_ptr: vec![0; n + 1], col: vec![], val: vec![] }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col[r.clone()].iter().copied().zip(self.val[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|(c, _)| *c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `xᵀ A y`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }

    /// `self + s·other` (same dimension).
    pub fn add_scaled(&self, s: f64, other: &Csr) -> Csr {
        let mut row_ptr = vec![0; self.n + 1];
        let mut col = Vec::with_capacity(self.val.len().max(other.val.len()));
        let mut val = Vec::with_capacity(col.capacity());
        for i in 0..self.n {
            let (mut a, a_end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let (mut b, b_end) = (other.row_ptr[i], other.row_ptr[i + 1]);
            while a < a_end || b < b_end {
                let ca = if a < a_end { self.col[a] } else { usize::MAX };
                let cb = if b < b_end { other.col[b] } else { usize::MAX };
                if ca == cb {
                    col.push(ca);
                    val.push(self.val[a] + s * other.val[b]);
                    a += 1;
                    b += 1;
                } else if ca < cb {
                    col.push(ca);
                    val.push(self.val[a]);
                    a += 1;
                } else {
                    col.push(cb);
                    val.push(s * other.val[b]);
                    b += 1;
                }
            }
            row_ptr[i + 1] = col.len();
        }
        Csr { n: self.n, row_ptr, col, val }
    }

    /// Principal submatrix on `keep` (indices in the new numbering follow `keep`).
    pub fn restrict(&self, keep: &[usize]) -> Csr {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new, &old) in keep.iter().enumerate() {
            for (j, v) in self.row(old) {
                if map[j] != usize::MAX {
                    t.push((new, map[j], v));
                }
            }
        }
        Csr::from_triplets(keep.len(), t)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }
}

/// Reverse Cuthill–McKee ordering of the graph of `a`; `perm[new] = old`.
pub fn rcm(a: &Csr) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n).map(|i| a.row_ptr[i + 1] - a.row_ptr[i]).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap_or(0);
        // walk to a pseudo-peripheral node: the last node of a BFS sweep
        let mut root = seed;
        for _ in 0..2 {
            let levels = bfs(a, root, &visited);
            root = *levels.last().unwrap_or(&root);
        }
        let start = order.len();
        visited[root] = true;
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut next: Vec<usize> = a.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                if !visited[j] {
                    visited[j] = true;
                    order.push(j);
                }
            }
        }
    }
    order.reverse();
    order
}

fn bfs(a: &Csr, root: usize, blocked: &[bool]) -> Vec<usize> {
    let mut seen = blocked.to_vec();
    seen[root] = true;
    let mut order = vec![root];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for (j, _) in a.row(v) {
            if !seen[j] {
                seen[j] = true;
                order.push(j);
            }
        }
    }
    order
}

/// `L Lᵀ` factor of `P A Pᵀ` (RCM ordering) stored by rows of the lower profile.
#[derive(Debug, Clone)]
pub struct Skyline {
    n: usize,
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl Skyline {
    /// Factor the symmetric matrix `a`; `None` if it is not positive definite.
    pub fn factor(a: &Csr) -> Option<Self> {
        let perm = rcm(a);
        let mut f = Self::factor_ordered(&a.restrict(&perm))?;
        f.perm = perm;
        Some(f)
    }

    fn factor_ordered(a: &Csr) -> Option<Self> {
        let n = a.n;
        let first: Vec<usize> = (0..n).map(|i| a.row(i).map(|(j, _)| j).min().unwrap_or(i).min(i)).collect();
        let mut start = vec![0; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    data[start[i] + j - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = data[start[i] + j - fi];
                let ri = &data[start[i] + lo - fi..start[i] + j - fi];
                let rj = &data[start[j] + lo - fj..start[j] + j - fj];
                s -= ri.iter().zip(rj).map(|(x, y)| x * y).sum::<f64>();
                if j == i {
                    if !(s > 0.0) {
                        return None;
                    }
                    data[start[i] + i - fi] = s.sqrt();
                } else {
                    data[start[i] + j - fi] = s / data[start[j] + j - fj];
                }
            }
        }
        Some(Self { n, perm: Vec::new(), first, start, data })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (k, l) in row[..i - fi].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &i) in self.perm.iter().enumerate() {
            x[i] = y[k];
        }
        x
    }

    pub fn profile_len(&self) -> usize {
        self.data.len()
    }
}

/// Eigen-decomposition of a small dense symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues ascending and column eigenvectors `v[row][col]`.
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> Csr {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        Csr::from_triplets(n, t)
    }

    #[test]
    fn cholesky_solves_tridiagonal() {
        let a = laplacian_1d(50);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.mul_vec(&x);
        let f = Skyline::factor(&a).unwrap();
        let y = f.solve(&b);
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-11);
        }
        assert_eq!(f.profile_len(), 99);
    }

    #[test]
    fn rcm_recovers_band_of_shuffled_chain() {
        let n = 40;
        let shuffle: Vec<usize> = (0..n).map(|i| (i * 17) % n).collect();
        let a = laplacian_1d(n).restrict(&shuffle);
        let f = Skyline::factor(&a).unwrap();
        assert_eq!(f.profile_len(), 2 * n - 1);
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let y = f.solve(&a.mul_vec(&x));
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-9));
    }

    #[test]
    fn indefinite_matrix_is_refused() {
        let a = laplacian_1d(10).add_scaled(-5.0, &Csr::from_triplets(10, (0..10).map(|i| (i, i, 1.0)).collect()));
        assert!(Skyline::factor(&a).is_none());
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        // eigenvalues of tridiag(-1, 2, -1) of size n are 2 - 2cos(kπ/(n+1))
        let n = 6;
        let a = laplacian_1d(n);
        let dense: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
        let (vals, vecs) = symmetric_eigen(&dense);
        for (k, l) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((l - exact).abs() < 1e-12);
        }
        for c in 0..n {
            let col: Vec<f64> = (0..n).map(|r| vecs[r][c]).collect();
            let ac = a.mul_vec(&col);
            for r in 0..n {
                assert!((ac[r] - vals[c] * col[r]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duplicates_are_summed_and_restriction_keeps_order() {
        let a = Csr::from_triplets(3, vec![(0, 0, 1.0), (0, 0, 2.0), (2, 1, 4.0), (1, 2, 4.0), (2, 2, 1.0)]);
        assert_eq!(a.get(0, 0), 3.0);
        let r = a.restrict(&[1, 2]);
        assert_eq!(r.get(0, 1), 4.0);
        assert_eq!(r.get(1, 1), 1.0);
    }
}
