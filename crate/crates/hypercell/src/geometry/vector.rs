//! Inline small vectors and the dense linear algebra used by the vertex solves.

use std::ops::{Add, Index, Mul, Neg, Sub};

use super::GeometryError;

/// Largest supported ambient dimension (simplex vertex/volume queries only;
/// full cells are restricted to dimensions 2 and 3).
pub const MAX_DIM: usize = 8;

/// A point or vector of `R^d`, `2 <= d <= MAX_DIM`, stored inline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: usize,
}

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            coords.len() >= 2 && coords.len() <= MAX_DIM,
            "dimension {} outside supported range 2..={}",
            coords.len(),
            MAX_DIM
        );
        let mut buf = [0.0; MAX_DIM];
        buf[..coords.len()].copy_from_slice(coords);
        Self { coords: buf, dim: coords.len() }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for k in 0..self.dim {
            acc += self.coords[k] * other.coords[k];
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, t: f64) -> Point {
        let mut out = *self;
        for k in 0..self.dim {
            out.coords[k] *= t;
        }
        out
    }

    /// Cross product, dimension 3 only.
    pub fn cross(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim, 3);
        Point::new(&[
            self.coords[1] * other.coords[2] - self.coords[2] * other.coords[1],
            self.coords[2] * other.coords[0] - self.coords[0] * other.coords[2],
            self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0],
        ])
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.coords[i]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for k in 0..self.dim {
            out.coords[k] += rhs.coords[k];
        }
        out
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for k in 0..self.dim {
            out.coords[k] -= rhs.coords[k];
        }
        out
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, t: f64) -> Point {
        self.scale(t)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

/// A unit vector of the sphere `S^{d-1}`; renormalized on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector(Point);

impl UnitVector {
    /// Builds a unit vector from arbitrary nonzero coordinates.
    pub fn new(coords: &[f64]) -> Result<Self, GeometryError> {
        let p = Point::new(coords);
        let n = p.norm();
        if !n.is_finite() || n < 1e-14 {
            return Err(GeometryError::InvalidInput("direction has (near) zero norm"));
        }
        let u = p.scale(1.0 / n);
        debug_assert!((u.norm() - 1.0).abs() <= 1e-12);
        Ok(Self(u))
    }

    /// Unit vector from a planar angle (dimension 2).
    pub fn from_angle(theta: f64) -> Self {
        Self(Point::new(&[theta.cos(), theta.sin()]))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.coords()
    }

    pub fn as_point(&self) -> Point {
        self.0
    }

    pub fn dot(&self, p: &Point) -> f64 {
        self.0.dot(p)
    }

    pub fn dot_unit(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn flipped(&self) -> UnitVector {
        UnitVector(-self.0)
    }
}

impl Index<usize> for UnitVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Solves the square system `rows * x = rhs` by Gauss-Jordan elimination with
/// partial pivoting, returning the solution together with the infinity-norm
/// condition number estimate `||A|| * ||A^-1||` (computed from the explicit
/// inverse; the systems here are at most 8x8).
pub fn solve_with_condition(rows: &[Point], rhs: &[f64]) -> Result<(Point, f64), GeometryError> {
    let n = rows.len();
    assert!(n >= 2 && n <= MAX_DIM && rhs.len() == n);
    let mut a = [[0.0f64; 2 * MAX_DIM]; MAX_DIM];
    for (i, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.dim(), n);
        a[i][..n].copy_from_slice(row.coords());
        a[i][n + i] = 1.0;
    }
    let norm_a = rows
        .iter()
        .map(|r| r.coords().iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(GeometryError::IllConditioned(f64::INFINITY));
        }
        a.swap(col, pivot);
        let inv = 1.0 / a[col][col];
        for v in a[col].iter_mut().take(2 * n) {
            *v *= inv;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                if factor != 0.0 {
                    for k in 0..2 * n {
                        a[row][k] -= factor * a[col][k];
                    }
                }
            }
        }
    }

    let norm_inv = (0..n)
        .map(|i| (0..n).map(|j| a[i][n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let cond = norm_a * norm_inv;

    let mut x = [0.0; MAX_DIM];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += a[i][n + j] * rhs[j];
        }
        x[i] = acc;
    }
    Ok((Point::new(&x[..n]), cond))
}

/// Determinant of the square matrix whose columns are the given vectors (LU
/// with partial pivoting).
pub fn determinant(cols: &[Point]) -> f64 {
    let n = cols.len();
    assert!(n >= 1 && n <= MAX_DIM);
    let mut a = [[0.0f64; MAX_DIM]; MAX_DIM];
    for (j, c) in cols.iter().enumerate() {
        debug_assert_eq!(c.dim(), n);
        for i in 0..n {
            a[i][j] = c[i];
        }
    }
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        let inv = 1.0 / a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] * inv;
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    det
}

/// Rank of the set of vectors within the given absolute tolerance (row
/// echelon on a scratch copy).
pub fn rank(vectors: &[Point], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].dim();
    let mut rows: Vec<[f64; MAX_DIM]> = vectors
        .iter()
        .map(|v| {
            let mut r = [0.0; MAX_DIM];
            r[..dim].copy_from_slice(v.coords());
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let pivot = (rank..rows.len()).max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs()));
        let Some(pivot) = pivot else { break };
        if rows[pivot][col].abs() <= tol {
            continue;
        }
        rows.swap(rank, pivot);
        let inv = 1.0 / rows[rank][col];
        for row in rank + 1..rows.len() {
            let factor = rows[row][col] * inv;
            if factor != 0.0 {
                for k in col..dim {
                    rows[row][k] -= factor * rows[rank][k];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
