//! Typical-cell samplers: the exact inball construction for absolutely
//! continuous directional distributions and the window tessellation for
//! general ones, both driven by counter-based random substreams.

pub mod inball;
pub mod record;
pub mod stream;
pub mod window;

pub use inball::{
    sample_environment, sample_inradius, sample_simplex_directions, sample_typical_cell_inball,
};
pub use record::{SampleOrigin, TypicalCellSample};
pub use stream::{RandomStream, SLOTS_PER_STREAM};
pub use window::{sample_window_tessellation, WindowStats, MAX_ARRANGEMENT_CELLS, WINDOW_MARGIN};

use crate::directions::DirectionsError;
use crate::functionals::FunctionalError;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SampleError {
    #[error("unsupported distribution: {0}")]
    UnsupportedDistribution(&'static str),
    #[error("tuple rejection stalled (acceptance below 1e-6)")]
    RejectionStall,
    #[error("degenerate sample: {0}")]
    Degenerate(GeometryError),
    #[error("arrangement exceeded {MAX_ARRANGEMENT_CELLS} cells")]
    ArrangementOverflow,
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Directions(#[from] DirectionsError),
}

impl SampleError {
    /// Errors that mean "drop this slot and count it" rather than a
    /// configuration or environment problem.
    pub fn is_droppable(&self) -> bool {
        matches!(
            self,
            SampleError::Degenerate(_)
                | SampleError::Functional(FunctionalError::Geometry(_))
                | SampleError::Functional(FunctionalError::NormalizationFailed)
        )
    }
}

/// Acceptance bookkeeping for the size-biased tuple sampler.
#[derive(Debug, Default, Clone, Copy)]
pub struct TupleStats {
    pub proposals: u64,
    pub accepted: u64,
    pub marginal: u64,
}

impl TupleStats {
    pub fn merge(&mut self, other: &TupleStats) {
        self.proposals += other.proposals;
        self.accepted += other.accepted;
        self.marginal += other.marginal;
    }
}
