//! Brute-force oracles shared by the integration suites. Everything here is
//! deliberately independent of the incremental/LP/Welzl implementation paths
//! it cross-checks: plain subset enumeration and small dense solves only.

// Each integration target compiles its own copy; not every target uses every
// oracle.
#![allow(dead_code)]

use hypercell::geometry::{ConvexCell, Halfspace, Point, UnitVector};
use rand::Rng;

/// Feasibility slack used when filtering candidate vertices.
pub const ORACLE_TOL: f64 = 1e-7;

fn solve2(a: &Halfspace, b: &Halfspace) -> Option<Point> {
    let (a0, a1, ab) = (a.normal()[0], a.normal()[1], a.bound());
    let (b0, b1, bb) = (b.normal()[0], b.normal()[1], b.bound());
    let det = a0 * b1 - a1 * b0;
    if det.abs() < 1e-10 {
        return None;
    }
    Some(Point::new(&[(ab * b1 - a1 * bb) / det, (a0 * bb - ab * b0) / det]))
}

fn solve3(a: &Halfspace, b: &Halfspace, c: &Halfspace) -> Option<Point> {
    let rows = [a, b, c].map(|h| [h.normal()[0], h.normal()[1], h.normal()[2]]);
    let rhs = [a.bound(), b.bound(), c.bound()];
    // Cramer's rule on the 3x3 system.
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(rows);
    if d.abs() < 1e-10 {
        return None;
    }
    let mut x = [0.0; 3];
    for col in 0..3 {
        let mut m = rows;
        for (r, item) in m.iter_mut().enumerate() {
            item[col] = rhs[r];
        }
        x[col] = det3(m) / d;
    }
    Some(Point::new(&x))
}

fn feasible(p: &Point, halfspaces: &[Halfspace], tol: f64) -> bool {
    halfspaces.iter().all(|h| h.excess(p) <= tol)
}

fn dedup(points: Vec<Point>, tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.dist(&p) <= tol) {
            out.push(p);
        }
    }
    out
}

/// All vertices of the polyhedron `{x : <u_i, x> <= b_i}` by enumerating the
/// d-subsets of constraint planes and filtering by feasibility.
pub fn enumerate_vertices(halfspaces: &[Halfspace], dim: usize) -> Vec<Point> {
    let n = halfspaces.len();
    let mut cands = Vec::new();
    match dim {
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    if let Some(p) = solve2(&halfspaces[i], &halfspaces[j]) {
                        if feasible(&p, halfspaces, ORACLE_TOL) {
                            cands.push(p);
                        }
                    }
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        if let Some(p) = solve3(&halfspaces[i], &halfspaces[j], &halfspaces[k]) {
                            if feasible(&p, halfspaces, ORACLE_TOL) {
                                cands.push(p);
                            }
                        }
                    }
                }
            }
        }
        _ => panic!("oracle supports dimensions 2 and 3"),
    }
    dedup(cands, 1e-7)
}

/// True iff the two point sets match pairwise within `tol`.
pub fn same_vertex_set(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.dist(q) <= tol))
        && b.iter().all(|q| a.iter().any(|p| p.dist(q) <= tol))
}

/// Exact Chebyshev radius by enumerating (d+1)-subsets of constraints: the
/// optimal inscribed ball is pinned by d+1 active facets.
pub fn exact_inradius(halfspaces: &[Halfspace], dim: usize) -> f64 {
    let n = halfspaces.len();
    let mut best = f64::NEG_INFINITY;
    let mut subset = vec![0usize; dim + 1];
    fn solve_active(hs: &[&Halfspace], dim: usize) -> Option<(Vec<f64>, f64)> {
        // Solve [u_i, 1] [x; r] = b_i by Gaussian elimination.
        let m = dim + 1;
        let mut a = vec![vec![0.0f64; m + 1]; m];
        for (r, h) in hs.iter().enumerate() {
            for c in 0..dim {
                a[r][c] = h.normal()[c];
            }
            a[r][dim] = 1.0;
            a[r][m] = h.bound();
        }
        for col in 0..m {
            let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
            if a[piv][col].abs() < 1e-12 {
                return None;
            }
            a.swap(col, piv);
            for row in 0..m {
                if row != col {
                    let f = a[row][col] / a[col][col];
                    for c in col..=m {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
        let sol: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
        Some((sol[..dim].to_vec(), sol[dim]))
    }
    fn recurse(
        halfspaces: &[Halfspace],
        dim: usize,
        subset: &mut Vec<usize>,
        depth: usize,
        start: usize,
        best: &mut f64,
    ) {
        if depth == dim + 1 {
            let hs: Vec<&Halfspace> = subset.iter().map(|&i| &halfspaces[i]).collect();
            if let Some((x, r)) = solve_active(&hs, dim) {
                if r > *best {
                    let p = Point::new(&x);
                    if halfspaces.iter().all(|h| h.normal().dot(&p) + r <= h.bound() + ORACLE_TOL) {
                        *best = r;
                    }
                }
            }
            return;
        }
        for i in start..halfspaces.len() {
            subset[depth] = i;
            recurse(halfspaces, dim, subset, depth + 1, i + 1, best);
        }
    }
    recurse(halfspaces, dim, &mut subset, 0, 0, &mut best);
    best
}

/// Smallest enclosing ball radius by exhausting all boundary subsets of size
/// up to d+1 (the O(n^4) route).
pub fn exact_circumradius(points: &[Point], dim: usize) -> f64 {
    fn circumsphere(pts: &[Point]) -> Option<(Point, f64)> {
        if pts.len() == 1 {
            return Some((pts[0], 0.0));
        }
        let base = pts[0];
        let k = pts.len() - 1;
        let diffs: Vec<Point> = pts[1..].iter().map(|p| *p - base).collect();
        let mut a = vec![vec![0.0f64; k + 1]; k];
        for (i, di) in diffs.iter().enumerate() {
            for (j, dj) in diffs.iter().enumerate() {
                a[i][j] = 2.0 * di.dot(dj);
            }
            a[i][k] = di.dot(di);
        }
        for col in 0..k {
            let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
            if a[piv][col].abs() < 1e-12 {
                return None;
            }
            a.swap(col, piv);
            for row in 0..k {
                if row != col {
                    let f = a[row][col] / a[col][col];
                    for c in col..=k {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
        let coeffs: Vec<f64> = (0..k).map(|i| a[i][k] / a[i][i]).collect();
        let mut center = base;
        for (c, d) in coeffs.iter().zip(&diffs) {
            center = center + d.scale(*c);
        }
        let r = pts.iter().map(|p| center.dist(p)).fold(0.0, f64::max);
        Some((center, r))
    }
    let n = points.len();
    let mut best = f64::INFINITY;
    let mut consider = |subset: &[Point]| {
        if let Some((c, r)) = circumsphere(subset) {
            if points.iter().all(|p| c.dist(p) <= r * (1.0 + 1e-10) + 1e-12) {
                best = best.min(r);
            }
        }
    };
    for i in 0..n {
        consider(&[points[i]]);
        for j in i + 1..n {
            consider(&[points[i], points[j]]);
            for k in j + 1..n {
                consider(&[points[i], points[j], points[k]]);
                if dim == 3 {
                    for l in k + 1..n {
                        consider(&[points[i], points[j], points[k], points[l]]);
                    }
                }
            }
        }
    }
    best
}

/// Simplex volume from pairwise distances via the Cayley-Menger determinant:
/// a route independent of the edge-vector determinant.
pub fn cayley_menger_volume(points: &[Point]) -> f64 {
    let n = points.len(); // simplex on n points in dimension n-1
    let d = n - 1;
    let m = n + 1;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 1..m {
        a[0][i] = 1.0;
        a[i][0] = 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            let dist = points[i].dist(&points[j]);
            a[i + 1][j + 1] = dist * dist;
        }
    }
    // Determinant by elimination with partial pivoting.
    let mut det = 1.0;
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for c in col..m {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }
    // V^2 = (-1)^{d+1} det(CM) / (2^d (d!)^2).
    let sign = if d % 2 == 0 { -1.0 } else { 1.0 };
    let v2 = sign * det / (2.0f64.powi(d as i32) * fact * fact);
    v2.max(0.0).sqrt()
}

/// Random convex polygon cell built from points in a box; `None` when the
/// draw degenerates.
pub fn random_polygon(rng: &mut impl Rng, n_pts: usize, scale: f64) -> Option<ConvexCell> {
    let pts: Vec<Point> = (0..n_pts)
        .map(|_| {
            Point::new(&[
                (rng.gen::<f64>() - 0.5) * 2.0 * scale,
                (rng.gen::<f64>() - 0.5) * 2.0 * scale,
            ])
        })
        .collect();
    ConvexCell::convex_polygon(&pts).ok()
}

/// Random bounded 3-cell: a generically rotated tangent simplex clipped by a
/// few random planes.
pub fn random_cell_3d(rng: &mut impl Rng, extra_cuts: usize) -> Option<ConvexCell> {
    let dirs = loop {
        let cand: Vec<UnitVector> = (0..4)
            .map(|_| {
                let v = [
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                ];
                UnitVector::new(&v).unwrap()
            })
            .collect();
        let tuple = hypercell::geometry::DirectionTuple::new(cand).unwrap();
        if tuple.half_sphere_test() {
            break tuple;
        }
    };
    let mut cell = dirs.tangent_simplex().ok()?;
    for _ in 0..extra_cuts {
        let normal = UnitVector::new(&[
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
        ])
        .ok()?;
        let bound = 0.3 + 2.0 * rng.gen::<f64>();
        match cell.clip(&Halfspace::new(normal, bound)) {
            Ok(next) => cell = next,
            Err(_) => continue,
        }
    }
    Some(cell)
}
