//! Exact typical-cell sampling for absolutely continuous directional
//! distributions.
//!
//! A sample is assembled from three independent ingredients: a direction
//! tuple drawn with hull-volume size bias and restricted to the positively
//! spanning set, an exponential inball radius, and a Poisson environment of
//! hyperplanes that miss the inball. The tangent simplex scaled to the drawn
//! radius is clipped by the environment; the result carries `B(0, r)` as its
//! inball, with the incenter at the origin and exactly `d + 1` tangent
//! facets.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::directions::ProcessParams;
use crate::geometry::{DirectionTuple, GeometryError, Halfspace, Hyperplane};

use super::record::{finish_sample, SampleOrigin, TypicalCellSample};
use super::{SampleError, TupleStats};

const STALL_PROPOSALS: u64 = 10_000_000;

/// Draws a direction tuple with density proportional to its hull volume on
/// the positively spanning set: i.i.d. proposals from the directional
/// distribution, accepted with probability `hull_volume / delta_max`.
pub fn sample_simplex_directions(
    params: &ProcessParams,
    stats: &mut TupleStats,
    rng: &mut impl Rng,
) -> Result<DirectionTuple, SampleError> {
    if !params.dist.is_absolutely_continuous() {
        return Err(SampleError::UnsupportedDistribution(
            "size-biased tuple sampling needs an absolutely continuous distribution",
        ));
    }
    let dim = params.dim;
    let delta_max = params.dist.delta_max(dim);
    loop {
        stats.proposals += 1;
        if stats.proposals >= STALL_PROPOSALS && stats.accepted * STALL_PROPOSALS < stats.proposals {
            return Err(SampleError::RejectionStall);
        }
        let mut dirs = Vec::with_capacity(dim + 1);
        for _ in 0..=dim {
            dirs.push(params.dist.sample_in_dim(dim, rng)?);
        }
        let tuple = DirectionTuple::new(dirs).map_err(SampleError::Degenerate)?;
        // The volume threshold is drawn unconditionally to keep the stream
        // layout independent of the spanning verdict.
        let threshold = rng.gen::<f64>() * delta_max;
        match tuple.spanning_verdict() {
            crate::geometry::SpanningVerdict::Spanning => {
                if threshold <= tuple.hull_volume() {
                    stats.accepted += 1;
                    return Ok(tuple);
                }
            }
            crate::geometry::SpanningVerdict::Marginal => stats.marginal += 1,
            crate::geometry::SpanningVerdict::NotSpanning => {}
        }
    }
}

/// Exponential(gamma) radius; with `a_cap` an exact truncated draw on
/// `(0, a_cap)` via the inverse CDF, which implements conditioning on
/// `{r(Z) < a_cap}` exactly.
pub fn sample_inradius(gamma: f64, a_cap: Option<f64>, rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen();
    match a_cap {
        None => -(-u).ln_1p() / gamma,
        Some(a) => {
            let mass = -(-gamma * a).exp_m1(); // 1 - e^{-gamma a}
            -(-u * mass).ln_1p() / gamma
        }
    }
}

/// All hyperplanes of the process whose distance from the origin falls in
/// `(inner_r, outer_r]`: a Poisson(gamma (outer - inner)) count with uniform
/// offsets and directional-law normals.
pub fn sample_environment(
    params: &ProcessParams,
    inner_r: f64,
    outer_r: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Hyperplane>, SampleError> {
    assert!(inner_r >= 0.0 && outer_r > inner_r && outer_r.is_finite());
    let lambda = params.gamma * (outer_r - inner_r);
    let n = if lambda > 0.0 {
        Poisson::new(lambda).expect("positive rate").sample(rng) as usize
    } else {
        0
    };
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let offset = outer_r - u * (outer_r - inner_r); // lands in (inner, outer]
        let normal = params.dist.sample_in_dim(params.dim, rng)?;
        out.push(Hyperplane::new(normal, offset).map_err(SampleError::Degenerate)?);
    }
    Ok(out)
}

/// One typical cell via the inball construction. Degenerate geometry is
/// reported as an error for the caller to drop and count; the slot is never
/// silently retried.
pub fn sample_typical_cell_inball(
    params: &ProcessParams,
    a_cap: Option<f64>,
    stats: &mut TupleStats,
    seed: u64,
    stream: u64,
    slot: u64,
    rng: &mut impl Rng,
) -> Result<TypicalCellSample, SampleError> {
    if params.dim != 2 && params.dim != 3 {
        return Err(SampleError::UnsupportedDistribution("cell sampling supports dimensions 2 and 3"));
    }
    let tuple = sample_simplex_directions(params, stats, rng)?;
    let r = sample_inradius(params.gamma, a_cap, rng);
    let simplex = tuple.tangent_simplex().map_err(SampleError::Degenerate)?;
    let mut cell = simplex.scaled(r);

    // Environment hyperplanes in radial order: offsets step by Exp(gamma)
    // gaps, so the process law on (r, outer] is exact. Once the offset
    // exceeds the cell's circumscribed radius every later plane is redundant
    // and generation stops.
    let outer = cell.max_vertex_norm();
    let mut bound = outer;
    let mut t = r;
    loop {
        t += sample_inradius(params.gamma, None, rng);
        if t > bound {
            break;
        }
        let normal = params.dist.sample_in_dim(params.dim, rng)?;
        match cell.clip(&Halfspace::new(normal, t)) {
            Ok(next) => {
                cell = next;
                bound = bound.min(cell.max_vertex_norm());
            }
            // The inball B(0, r) survives every cut with offset > r, so an
            // empty intersection can only be a numerical degeneracy.
            Err(GeometryError::EmptyCell) | Err(GeometryError::DegenerateClip) => {
                return Err(SampleError::Degenerate(GeometryError::DegenerateClip));
            }
            Err(e) => return Err(SampleError::Degenerate(e)),
        }
    }

    finish_sample(cell, SampleOrigin::InballSampler, Some(r), &params.dist, a_cap, seed, stream, slot)
}
