//! Oriented hyperplanes and origin-side halfspaces.

use super::vector::{Point, UnitVector};
use super::GeometryError;

/// The affine hyperplane `{x : <x, normal> = offset}` with `offset > 0`.
///
/// Hyperplanes through the origin have measure zero under the process
/// intensity and are rejected at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperplane {
    normal: UnitVector,
    offset: f64,
}

impl Hyperplane {
    pub fn new(normal: UnitVector, offset: f64) -> Result<Self, GeometryError> {
        if !(offset > 0.0) || !offset.is_finite() {
            return Err(GeometryError::InvalidInput("hyperplane offset must be positive"));
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> UnitVector {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// The halfspace supported by this hyperplane that contains the origin.
    pub fn origin_halfspace(&self) -> Halfspace {
        Halfspace::new(self.normal, self.offset)
    }
}

/// The closed halfspace `{x : <x, normal> <= bound}`; `bound` may be any real
/// (cones through the origin use bound 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Halfspace {
    normal: UnitVector,
    bound: f64,
}

impl Halfspace {
    pub fn new(normal: UnitVector, bound: f64) -> Self {
        Self { normal, bound }
    }

    pub fn normal(&self) -> UnitVector {
        self.normal
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Signed slack `<x, normal> - bound`; positive outside, negative inside.
    pub fn excess(&self, x: &Point) -> f64 {
        self.normal.dot(x) - self.bound
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.excess(x) <= tol
    }

    /// The complementary halfspace `{x : <x, normal> >= bound}`.
    pub fn complement(&self) -> Halfspace {
        Halfspace::new(self.normal.flipped(), -self.bound)
    }

    /// The halfspace moved by `shift` (so that `x` is inside the result iff
    /// `x - shift` was inside `self`).
    pub fn translated(&self, shift: &Point) -> Halfspace {
        Halfspace::new(self.normal, self.bound + self.normal.dot(shift))
    }

    /// Halfspace after scaling the ambient space by `t > 0`.
    pub fn scaled(&self, t: f64) -> Halfspace {
        Halfspace::new(self.normal, self.bound * t)
    }
}
