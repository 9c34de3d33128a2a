//! Exact convex geometry: hyperplanes, halfspace clipping, tangent simplices
//! and their volumes. All operations are pure functions of immutable values.

pub mod cell;
pub mod hyperplane;
pub mod lp;
pub mod simplex;
pub mod vector;

pub use cell::ConvexCell;
pub use hyperplane::{Halfspace, Hyperplane};
pub use simplex::{positively_spans, DirectionTuple, SpanningVerdict};
pub use vector::{Point, UnitVector, MAX_DIM};

/// Relative tolerance for vertex feasibility, duplicate merging and
/// empty-interior detection.
pub const EPS_GEOM: f64 = 1e-9;

/// Condition-number cutoff for simplex vertex solves; worse systems are
/// rejected and counted rather than perturbed.
pub const KAPPA_MAX: f64 = 1e12;

/// Interiority margin of the positive-spanning LP; tuples inside the margin
/// are classified as not spanning.
pub const DELTA_SPAN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("intersection has empty interior")]
    EmptyCell,
    #[error("directions do not positively span the space")]
    NotPositivelySpanning,
    #[error("vertex solve condition number {0:.3e} above cutoff")]
    IllConditioned(f64),
    #[error("clip met a vertex inside the tolerance band")]
    DegenerateClip,
    #[error("dimension {0} not supported here")]
    UnsupportedDimension(usize),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}
