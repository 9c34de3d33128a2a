//! Direction tuples, the positive-spanning predicate, and the simplex
//! circumscribed about the unit ball whose facets are tangent at the given
//! outward normals.

use super::cell::{order_ring_ccw, ConvexCell};
use super::hyperplane::Halfspace;
use super::lp::{solve, LpOutcome, StandardForm};
use super::vector::{determinant, rank, solve_with_condition, Point, UnitVector};
use super::{GeometryError, DELTA_SPAN, KAPPA_MAX};

/// Outcome of the positive-spanning test. `Marginal` means the strictest
/// positive combination sits inside the interiority margin; such tuples are
/// classified as not spanning and counted by callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanningVerdict {
    Spanning,
    Marginal,
    NotSpanning,
}

/// Tests whether the directions positively span `R^d` strictly: there exist
/// `lambda_i > 0` with `sum lambda_i u_i = 0` and the directions span the full
/// space. Equivalently, no closed half sphere contains all of them.
///
/// Decided by a small LP (maximize the smallest barycentric coefficient) plus
/// a rank check for the great-subsphere case.
pub fn positively_spans(dirs: &[UnitVector], dim: usize) -> SpanningVerdict {
    if dirs.len() < dim + 1 {
        return SpanningVerdict::NotSpanning;
    }
    let pts: Vec<Point> = dirs.iter().map(|u| u.as_point()).collect();
    if rank(&pts, 1e-10) < dim {
        return SpanningVerdict::NotSpanning;
    }

    // Variables: lambda_0..lambda_{m-1}, s, surplus w_0..w_{m-1}.
    let m = dirs.len();
    let ncols = 2 * m + 1;
    let mut rows = Vec::with_capacity(dim + 1 + m);
    for k in 0..dim {
        let mut row = vec![0.0; ncols];
        for (i, u) in dirs.iter().enumerate() {
            row[i] = u[k];
        }
        rows.push(row);
    }
    let mut row = vec![0.0; ncols];
    row[..m].fill(1.0);
    rows.push(row);
    for i in 0..m {
        let mut row = vec![0.0; ncols];
        row[i] = 1.0;
        row[m] = -1.0;
        row[m + 1 + i] = -1.0;
        rows.push(row);
    }
    let mut rhs = vec![0.0; dim + 1 + m];
    rhs[dim] = 1.0;
    let mut cost = vec![0.0; ncols];
    cost[m] = -1.0;

    let lp = StandardForm { ncols, rows, rhs, cost };
    match solve(&lp) {
        Ok(LpOutcome::Optimal { x, .. }) => {
            let s = x[m];
            if s >= DELTA_SPAN {
                SpanningVerdict::Spanning
            } else if s > 0.0 {
                SpanningVerdict::Marginal
            } else {
                SpanningVerdict::NotSpanning
            }
        }
        Ok(LpOutcome::Infeasible) => SpanningVerdict::NotSpanning,
        // Bounded by construction (s <= 1/m); treat numerical failures as
        // not spanning rather than perturbing.
        _ => SpanningVerdict::NotSpanning,
    }
}

/// A tuple of `d + 1` unit directions in `R^d`.
#[derive(Clone, Debug)]
pub struct DirectionTuple {
    dirs: Vec<UnitVector>,
    dim: usize,
}

impl DirectionTuple {
    pub fn new(dirs: Vec<UnitVector>) -> Result<Self, GeometryError> {
        let dim = dirs.first().map(UnitVector::dim).unwrap_or(0);
        if dirs.len() != dim + 1 || dirs.iter().any(|u| u.dim() != dim) {
            return Err(GeometryError::InvalidInput("tuple must hold d+1 directions of R^d"));
        }
        Ok(Self { dirs, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dirs(&self) -> &[UnitVector] {
        &self.dirs
    }

    /// True iff no closed half sphere contains the whole tuple.
    pub fn half_sphere_test(&self) -> bool {
        self.spanning_verdict() == SpanningVerdict::Spanning
    }

    pub fn spanning_verdict(&self) -> SpanningVerdict {
        positively_spans(&self.dirs, self.dim)
    }

    /// The vertex of the tangent simplex opposite facet `i`: the solution of
    /// `<u_j, x> = 1` for all `j != i`.
    pub fn simplex_vertex(&self, i: usize) -> Result<Point, GeometryError> {
        assert!(i <= self.dim);
        let rows: Vec<Point> = self
            .dirs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, u)| u.as_point())
            .collect();
        let rhs = vec![1.0; self.dim];
        let (x, cond) = solve_with_condition(&rows, &rhs)?;
        if cond > KAPPA_MAX {
            return Err(GeometryError::IllConditioned(cond));
        }
        Ok(x)
    }

    /// Lebesgue volume of the convex hull of the tuple (zero when affinely
    /// dependent); the size-bias weight of the tangent-simplex sampler.
    pub fn hull_volume(&self) -> f64 {
        let base = self.dirs[0].as_point();
        let cols: Vec<Point> = self.dirs[1..].iter().map(|u| u.as_point() - base).collect();
        let mut fact = 1.0;
        for k in 2..=self.dim {
            fact *= k as f64;
        }
        determinant(&cols).abs() / fact
    }

    /// The full tangent simplex as a cell, with its inball `B(0, 1)` touching
    /// every facet. Dimensions 2 and 3 only; vertex/volume queries above stay
    /// available in higher dimensions.
    pub fn tangent_simplex(&self) -> Result<ConvexCell, GeometryError> {
        if !self.half_sphere_test() {
            return Err(GeometryError::NotPositivelySpanning);
        }
        match self.dim {
            2 => {
                let mut order: Vec<usize> = vec![0, 1, 2];
                order.sort_by(|&a, &b| {
                    let ta = self.dirs[a][1].atan2(self.dirs[a][0]);
                    let tb = self.dirs[b][1].atan2(self.dirs[b][0]);
                    ta.total_cmp(&tb)
                });
                let mut vertices = Vec::with_capacity(3);
                let mut halfspaces = Vec::with_capacity(3);
                for k in 0..3 {
                    let prev = order[(k + 2) % 3];
                    let this = order[k];
                    let shared: Vec<usize> =
                        (0..3).filter(|&j| j != prev && j != this).collect();
                    vertices.push(self.simplex_vertex(shared[0])?);
                    halfspaces.push(Halfspace::new(self.dirs[this], 1.0));
                }
                Ok(ConvexCell::from_parts(2, halfspaces, vertices, Vec::new()))
            }
            3 => {
                let mut vertices = Vec::with_capacity(4);
                for i in 0..4 {
                    vertices.push(self.simplex_vertex(i)?);
                }
                let mut halfspaces = Vec::with_capacity(4);
                let mut faces = Vec::with_capacity(4);
                for (i, u) in self.dirs.iter().enumerate() {
                    let mut ring: Vec<usize> = (0..4).filter(|&j| j != i).collect();
                    order_ring_ccw(&mut ring, &vertices, u);
                    halfspaces.push(Halfspace::new(*u, 1.0));
                    faces.push(ring);
                }
                Ok(ConvexCell::from_parts(3, halfspaces, vertices, faces))
            }
            d => Err(GeometryError::UnsupportedDimension(d)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn equilateral() -> DirectionTuple {
        DirectionTuple::new(vec![
            UnitVector::from_angle(0.0),
            UnitVector::from_angle(2.0 * std::f64::consts::PI / 3.0),
            UnitVector::from_angle(4.0 * std::f64::consts::PI / 3.0),
        ])
        .unwrap()
    }

    pub fn regular_tetrahedron() -> DirectionTuple {
        DirectionTuple::new(vec![
            UnitVector::new(&[1.0, 1.0, 1.0]).unwrap(),
            UnitVector::new(&[1.0, -1.0, -1.0]).unwrap(),
            UnitVector::new(&[-1.0, 1.0, -1.0]).unwrap(),
            UnitVector::new(&[-1.0, -1.0, 1.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn half_sphere_test_examples() {
        assert!(equilateral().half_sphere_test());
        let flat = DirectionTuple::new(vec![
            UnitVector::new(&[1.0, 0.0]).unwrap(),
            UnitVector::new(&[-1.0, 0.0]).unwrap(),
            UnitVector::new(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        assert!(!flat.half_sphere_test());
        // Nearly antipodal pair plus one direction still spans strictly.
        let deg = std::f64::consts::PI / 180.0;
        let narrow = DirectionTuple::new(vec![
            UnitVector::from_angle(0.0),
            UnitVector::from_angle(179.0 * deg),
            UnitVector::from_angle(181.0 * deg),
        ])
        .unwrap();
        assert!(narrow.half_sphere_test());
    }

    #[test]
    fn half_sphere_matches_angular_sweep_oracle() {
        // Dense sweep over candidate half-plane normals: the tuple sits in a
        // closed half plane iff some w has min_i <u_i, w> >= 0.
        let sweep = |t: &DirectionTuple| {
            let steps = 200_000;
            for k in 0..steps {
                let w = UnitVector::from_angle(2.0 * std::f64::consts::PI * k as f64 / steps as f64);
                if t.dirs().iter().all(|u| u.dot_unit(&w) >= -1e-9) {
                    return false; // contained in a closed half plane
                }
            }
            true
        };
        let deg = std::f64::consts::PI / 180.0;
        let cases = [
            vec![0.0, 120.0 * deg, 240.0 * deg],
            vec![0.0, 179.0 * deg, 181.0 * deg],
            vec![0.0, 45.0 * deg, 90.0 * deg],
            vec![0.3, 2.0, 4.4],
        ];
        for angles in cases {
            let t = DirectionTuple::new(angles.iter().map(|&a| UnitVector::from_angle(a)).collect())
                .unwrap();
            assert_eq!(t.half_sphere_test(), sweep(&t), "angles {angles:?}");
        }
    }

    #[test]
    fn great_circle_tuple_is_not_spanning() {
        // Three equatorial directions in R^3 admit a positive zero combination
        // but sit inside the closed upper half sphere.
        let deg = 2.0 * std::f64::consts::PI / 3.0;
        let dirs = vec![
            UnitVector::new(&[1.0, 0.0, 0.0]).unwrap(),
            UnitVector::new(&[deg.cos(), deg.sin(), 0.0]).unwrap(),
            UnitVector::new(&[(2.0 * deg).cos(), (2.0 * deg).sin(), 0.0]).unwrap(),
            UnitVector::new(&[0.5, 0.1, 0.0]).unwrap(),
        ];
        assert_eq!(positively_spans(&dirs, 3), SpanningVerdict::NotSpanning);
    }

    #[test]
    fn equilateral_simplex_geometry() {
        let t = equilateral();
        let v0 = t.simplex_vertex(0).unwrap();
        assert!((v0[0] + 2.0).abs() < 1e-12 && v0[1].abs() < 1e-12);
        let cell = t.tangent_simplex().unwrap();
        cell.validate().unwrap();
        assert_eq!(cell.facet_count(), 3);
        for v in cell.vertices() {
            assert!((v.norm() - 2.0).abs() < 1e-12);
        }
        let delta = t.hull_volume();
        assert!((delta - 3.0 * 3.0_f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_vertices_match_linear_solve_oracle() {
        let s = 2.0_f64.sqrt() / 2.0;
        let t = DirectionTuple::new(vec![
            UnitVector::new(&[0.0, 1.0]).unwrap(),
            UnitVector::new(&[1.0, 0.0]).unwrap(),
            UnitVector::new(&[-s, -s]).unwrap(),
        ])
        .unwrap();
        // Generic 2x2 solve oracle: x = A^-1 [1, 1].
        let solve2 = |a: &UnitVector, b: &UnitVector| {
            let det = a[0] * b[1] - a[1] * b[0];
            Point::new(&[(b[1] - a[1]) / det, (a[0] - b[0]) / det])
        };
        let oracle = [
            solve2(&t.dirs()[1], &t.dirs()[2]),
            solve2(&t.dirs()[0], &t.dirs()[2]),
            solve2(&t.dirs()[0], &t.dirs()[1]),
        ];
        for i in 0..3 {
            let v = t.simplex_vertex(i).unwrap();
            assert!(v.dist(&oracle[i]) < 1e-12, "vertex {i}");
            // Strictly on the origin side of the opposite facet.
            assert!(t.dirs()[i].dot(&v) < 1.0);
        }
    }

    #[test]
    fn tetrahedron_volume_against_determinant_oracle() {
        let t = regular_tetrahedron();
        let cell = t.tangent_simplex().unwrap();
        cell.validate().unwrap();
        // Signed-determinant volume oracle over the 4 vertices.
        let v = cell.vertices();
        let vol = determinant(&[v[1] - v[0], v[2] - v[0], v[3] - v[0]]).abs() / 6.0;
        let expect = 8.0 * 3.0_f64.sqrt();
        assert!((vol - expect).abs() < 1e-9, "oracle volume {vol}");
        // Hull volume of the direction tuple itself.
        let expect_delta = 8.0 / (9.0 * 3.0_f64.sqrt());
        assert!((t.hull_volume() - expect_delta).abs() < 1e-12);
    }

    #[test]
    fn degenerate_hull_volume_is_zero() {
        let t = DirectionTuple::new(vec![
            UnitVector::from_angle(0.3),
            UnitVector::from_angle(0.3),
            UnitVector::from_angle(2.0),
        ])
        .unwrap();
        assert_eq!(t.hull_volume(), 0.0);
    }

    #[test]
    fn hull_volume_permutation_invariant() {
        let t = equilateral();
        let perm = DirectionTuple::new(vec![t.dirs()[2], t.dirs()[0], t.dirs()[1]]).unwrap();
        assert!((t.hull_volume() - perm.hull_volume()).abs() < 1e-15);
    }

    #[test]
    fn non_spanning_tuple_has_no_simplex() {
        let flat = DirectionTuple::new(vec![
            UnitVector::new(&[1.0, 0.0]).unwrap(),
            UnitVector::new(&[-1.0, 0.0]).unwrap(),
            UnitVector::new(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            flat.tangent_simplex(),
            Err(GeometryError::NotPositivelySpanning)
        ));
    }
}
