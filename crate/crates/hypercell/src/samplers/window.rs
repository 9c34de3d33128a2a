//! Window tessellation sampling for general (possibly atomic) directional
//! distributions.
//!
//! All lines meeting the disk `B(0, window_r)` are generated, the planar
//! arrangement is built by incremental cell splitting inside the bounding
//! box, and interior cells are retained by minus-sampling: the centroid must
//! fall in the shrunken disk and no vertex may touch the disk boundary.
//! Retained cells are recentred at their centroid and carry equal weight.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::directions::ProcessParams;
use crate::functionals;
use crate::geometry::{ConvexCell, GeometryError, Halfspace, Point};

use super::record::{finish_sample, SampleOrigin, TypicalCellSample};
use super::SampleError;

/// Minus-sampling margin: retained centroids stay inside `(1 - MARGIN) R`.
pub const WINDOW_MARGIN: f64 = 0.1;

/// Hard cap on arrangement size.
pub const MAX_ARRANGEMENT_CELLS: usize = 1_000_000;

/// Per-window tallies (degenerate line/cell events are counted, not retried).
#[derive(Debug, Default, Clone, Copy)]
pub struct WindowStats {
    pub lines: u64,
    pub cells_total: u64,
    pub cells_retained: u64,
    pub degenerate_splits: u64,
    pub dropped_cells: u64,
}

/// Samples one window tessellation and returns the retained recentred cells.
/// `slot_base` numbers the emitted samples sequentially from this window.
pub fn sample_window_tessellation(
    params: &ProcessParams,
    window_r: f64,
    stats: &mut WindowStats,
    seed: u64,
    stream: u64,
    slot_base: u64,
    rng: &mut impl Rng,
) -> Result<Vec<TypicalCellSample>, SampleError> {
    if params.dim != 2 {
        return Err(SampleError::UnsupportedDistribution("the window sampler is planar"));
    }
    assert!(window_r > 0.0);

    let w = window_r;
    let boxcell = ConvexCell::convex_polygon(&[
        Point::new(&[-w, -w]),
        Point::new(&[w, -w]),
        Point::new(&[w, w]),
        Point::new(&[-w, w]),
    ])
    .map_err(SampleError::Degenerate)?;

    let n_lines = Poisson::new(params.gamma * w)
        .expect("positive rate")
        .sample(rng) as usize;
    stats.lines += n_lines as u64;

    let mut cells = vec![boxcell];
    for _ in 0..n_lines {
        let u: f64 = rng.gen();
        let offset = w * (1.0 - u); // uniform on (0, w]
        let normal = params.dist.sample(rng)?;
        let hs = Halfspace::new(normal, offset);
        let co = hs.complement();

        let mut next = Vec::with_capacity(cells.len() + 8);
        for cell in cells {
            // Quick side test on the support interval.
            let mut smin = f64::INFINITY;
            let mut smax = f64::NEG_INFINITY;
            for v in cell.vertices() {
                let s = hs.excess(v);
                smin = smin.min(s);
                smax = smax.max(s);
            }
            let tol = cell.tolerance();
            if smax <= tol || smin >= -tol {
                next.push(cell);
                continue;
            }
            match (cell.clip(&hs), cell.clip(&co)) {
                (Ok(a), Ok(b)) => {
                    next.push(a);
                    next.push(b);
                }
                // A grazing line leaves the cell whole; a degenerate split is
                // counted and skipped.
                (Err(GeometryError::EmptyCell), _) | (_, Err(GeometryError::EmptyCell)) => {
                    next.push(cell);
                }
                _ => {
                    stats.degenerate_splits += 1;
                    next.push(cell);
                }
            }
        }
        cells = next;
        if cells.len() > MAX_ARRANGEMENT_CELLS {
            return Err(SampleError::ArrangementOverflow);
        }
    }
    stats.cells_total += cells.len() as u64;

    let keep_r = (1.0 - WINDOW_MARGIN) * w;
    let mut out = Vec::new();
    for cell in cells {
        if cell.max_vertex_norm() >= w - cell.tolerance() {
            continue; // touches (or leaves) the observation disk
        }
        let c = functionals::centroid(&cell);
        if c.norm() > keep_r {
            continue;
        }
        let centered = cell.translated(&(-c));
        let slot = slot_base + out.len() as u64;
        match finish_sample(
            centered,
            SampleOrigin::WindowSampler,
            None,
            &params.dist,
            None,
            seed,
            stream,
            slot,
        ) {
            Ok(s) => out.push(s),
            Err(SampleError::Degenerate(_)) | Err(SampleError::Functional(_)) => {
                stats.dropped_cells += 1;
            }
            Err(e) => return Err(e),
        }
    }
    stats.cells_retained += out.len() as u64;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::DirectionalDistribution;
    use crate::geometry::UnitVector;
    use crate::samplers::RandomStream;

    fn axes_params() -> ProcessParams {
        ProcessParams::new(
            1.0,
            2,
            DirectionalDistribution::discrete(vec![
                (UnitVector::new(&[1.0, 0.0]).unwrap(), 0.5),
                (UnitVector::new(&[0.0, 1.0]).unwrap(), 0.5),
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn axis_lines_make_rectangles_only() {
        let params = axes_params();
        let mut stats = WindowStats::default();
        let mut total = 0usize;
        for stream in 0..6u64 {
            let mut rng = RandomStream::slot(321, stream, 0).rng();
            let cells =
                sample_window_tessellation(&params, 25.0, &mut stats, 321, stream, 0, &mut rng)
                    .unwrap();
            for s in &cells {
                assert_eq!(s.fcount, 4, "every retained cell is a rectangle");
                s.cell.validate().unwrap();
                // Facet normals live in the support of the distribution.
                for h in s.cell.halfspaces() {
                    let n = h.normal();
                    assert!(
                        n[0].abs() > 1.0 - 1e-12 || n[1].abs() > 1.0 - 1e-12,
                        "normal off-support: {n:?}"
                    );
                }
            }
            total += cells.len();
        }
        assert!(total > 50, "expected a healthy number of retained cells, got {total}");
        assert_eq!(stats.degenerate_splits, 0);
    }

    #[test]
    fn retained_cells_are_interior_and_centred() {
        let params = ProcessParams::new(1.0, 2, DirectionalDistribution::isotropic()).unwrap();
        let mut stats = WindowStats::default();
        let w = 30.0;
        let mut rng = RandomStream::slot(5, 0, 0).rng();
        let cells = sample_window_tessellation(&params, w, &mut stats, 5, 0, 0, &mut rng).unwrap();
        assert!(!cells.is_empty());
        for s in &cells {
            let c = functionals::centroid(&s.cell);
            assert!(c.norm() < 1e-9 * w, "recentred centroid {c:?}");
            assert!(s.fcount >= 3);
            // Slots number the cells consecutively.
        }
        let slots: Vec<u64> = cells.iter().map(|s| s.slot).collect();
        assert_eq!(slots, (0..cells.len() as u64).collect::<Vec<_>>());
    }

    #[test]
    fn planar_only() {
        let params = ProcessParams::new(1.0, 3, DirectionalDistribution::isotropic()).unwrap();
        let mut stats = WindowStats::default();
        let mut rng = RandomStream::slot(5, 0, 0).rng();
        assert!(matches!(
            sample_window_tessellation(&params, 10.0, &mut stats, 5, 0, 0, &mut rng),
            Err(SampleError::UnsupportedDistribution(_))
        ));
    }
}
