//! One realized typical cell with its functional evaluations.

use crate::directions::DirectionalDistribution;
use crate::functionals::{self, FunctionalValues, ShapeSummary, SizeFunctional};
use crate::geometry::ConvexCell;

use super::SampleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleOrigin {
    InballSampler,
    WindowSampler,
}

impl SampleOrigin {
    pub fn name(&self) -> &'static str {
        match self {
            SampleOrigin::InballSampler => "inball",
            SampleOrigin::WindowSampler => "window",
        }
    }
}

/// A sampled typical cell. `inball_r` is the radial variable of the inball
/// construction (equal to the cell's inradius there) or the computed inradius
/// for window cells.
#[derive(Debug, Clone)]
pub struct TypicalCellSample {
    pub cell: ConvexCell,
    pub inball_r: f64,
    pub fcount: usize,
    pub functionals: FunctionalValues,
    pub summary: ShapeSummary,
    pub origin: SampleOrigin,
    pub conditioned_a: Option<f64>,
    pub seed: u64,
    pub stream: u64,
    pub slot: u64,
}

impl TypicalCellSample {
    /// `Sigma(Z)^{1/k}`, the size scale entering every conditioning event.
    pub fn sigma_root(&self, sigma: SizeFunctional) -> f64 {
        let k = sigma.degree(self.cell.dim());
        self.functionals.get(sigma).powf(1.0 / k)
    }
}

/// Evaluates all functionals plus the shape summary on a finished cell. The
/// inball pipeline centers shapes at the incenter, the window pipeline at the
/// centroid; summaries are translation-free either way.
pub(crate) fn finish_sample(
    cell: ConvexCell,
    origin: SampleOrigin,
    inball_r: Option<f64>,
    dist: &DirectionalDistribution,
    conditioned_a: Option<f64>,
    seed: u64,
    stream: u64,
    slot: u64,
) -> Result<TypicalCellSample, SampleError> {
    let values = functionals::evaluate_all(&cell, dist)?;
    let summary = functionals::summary_from_values(&values, cell.facet_count(), cell.dim());
    Ok(TypicalCellSample {
        fcount: cell.facet_count(),
        inball_r: inball_r.unwrap_or(values.inradius),
        functionals: values,
        summary,
        origin,
        conditioned_a,
        seed,
        stream,
        slot,
        cell,
    })
}
