//! Direction-tuple integrals: the limit-shape functional and the tail of the
//! phi-content of tangent simplices.

use crate::directions::ProcessParams;
use crate::functionals::{self, ShapeSummary, SizeFunctional};
use crate::geometry::{DirectionTuple, SpanningVerdict};
use crate::samplers::{RandomStream, SampleError};

use super::ratefit::fit_decay_rate;

/// Monte Carlo estimate of a tuple integral with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_tuples: u64,
    pub dropped: u64,
}

fn tuple_weight_and_summary(
    tuple: &DirectionTuple,
    params: &ProcessParams,
    sigma: SizeFunctional,
) -> Option<(f64, ShapeSummary)> {
    let cell = tuple.tangent_simplex().ok()?;
    let values = functionals::evaluate_all(&cell, &params.dist).ok()?;
    let k = sigma.degree(params.dim);
    let weight = tuple.hull_volume() / values.get(sigma).powf(1.0 / k);
    let summary = functionals::summary_from_values(&values, cell.facet_count(), params.dim);
    Some((weight, summary))
}

/// Plain Monte Carlo estimate of
/// `E[ g(shape(T)) hull_volume / Sigma(T)^{1/k} ; tuple spanning ]`
/// over i.i.d. direction tuples. With `g = 1_S`, normalizing by the `g = 1`
/// run gives the limiting conditional shape distribution of small cells.
pub fn limit_shape_oracle(
    params: &ProcessParams,
    sigma: SizeFunctional,
    g: &dyn Fn(&ShapeSummary) -> f64,
    n_tuples: u64,
    stream: RandomStream,
) -> Result<OracleEstimate, SampleError> {
    if !params.dist.is_absolutely_continuous() {
        return Err(SampleError::UnsupportedDistribution(
            "the limit-shape integral needs an absolutely continuous distribution",
        ));
    }
    let mut rng = stream.rng();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut dropped = 0u64;
    for _ in 0..n_tuples {
        let mut dirs = Vec::with_capacity(params.dim + 1);
        for _ in 0..=params.dim {
            dirs.push(params.dist.sample_in_dim(params.dim, &mut rng)?);
        }
        let tuple = DirectionTuple::new(dirs).map_err(SampleError::Degenerate)?;
        let val = if tuple.spanning_verdict() == SpanningVerdict::Spanning {
            match tuple_weight_and_summary(&tuple, params, sigma) {
                Some((w, summary)) => w * g(&summary),
                None => {
                    dropped += 1;
                    0.0
                }
            }
        } else {
            0.0
        };
        sum += val;
        sumsq += val * val;
    }
    let n = n_tuples as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    Ok(OracleEstimate { value: mean, stderr: (var / n).sqrt(), n_tuples, dropped })
}

/// Ratio form `E[w g] / E[w]` with a delta-method standard error; this is the
/// normalized limiting expectation of `g` under the small-cell shape law.
pub fn limit_shape_ratio(
    params: &ProcessParams,
    sigma: SizeFunctional,
    g: &dyn Fn(&ShapeSummary) -> f64,
    n_tuples: u64,
    stream: RandomStream,
) -> Result<OracleEstimate, SampleError> {
    if !params.dist.is_absolutely_continuous() {
        return Err(SampleError::UnsupportedDistribution(
            "the limit-shape integral needs an absolutely continuous distribution",
        ));
    }
    let mut rng = stream.rng();
    let mut sum_w = 0.0;
    let mut sum_wg = 0.0;
    let mut sum_w2 = 0.0;
    let mut sum_w2g = 0.0;
    let mut sum_w2g2 = 0.0;
    let mut dropped = 0u64;
    for _ in 0..n_tuples {
        let mut dirs = Vec::with_capacity(params.dim + 1);
        for _ in 0..=params.dim {
            dirs.push(params.dist.sample_in_dim(params.dim, &mut rng)?);
        }
        let tuple = DirectionTuple::new(dirs).map_err(SampleError::Degenerate)?;
        if tuple.spanning_verdict() != SpanningVerdict::Spanning {
            continue;
        }
        let Some((w, summary)) = tuple_weight_and_summary(&tuple, params, sigma) else {
            dropped += 1;
            continue;
        };
        let gv = g(&summary);
        sum_w += w;
        sum_wg += w * gv;
        sum_w2 += w * w;
        sum_w2g += w * w * gv;
        sum_w2g2 += w * w * gv * gv;
    }
    if sum_w <= 0.0 {
        return Err(SampleError::UnsupportedDistribution("no spanning tuples observed"));
    }
    let ratio = sum_wg / sum_w;
    // Var of the ratio estimator: sum (w_i (g_i - R))^2 / (sum w)^2.
    let resid_sq = sum_w2g2 - 2.0 * ratio * sum_w2g + ratio * ratio * sum_w2;
    let stderr = resid_sq.max(0.0).sqrt() / sum_w;
    Ok(OracleEstimate { value: ratio, stderr, n_tuples, dropped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailPoint {
    pub t: f64,
    pub survival: f64,
    pub bound_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCheck {
    pub points: Vec<TailPoint>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub min_phi: f64,
    pub n_tuples: u64,
}

/// Samples spanning tuples (unweighted) and reports the empirical survival of
/// the phi-content of their tangent simplices on the grid, together with the
/// fitted log-log tail exponent. `bound_ok` flags whether the grid as a whole
/// is consistent with a `C / t` envelope (fitted slope at most `-1 + 0.1`).
pub fn tail_check_phi_t(
    params: &ProcessParams,
    n_tuples: u64,
    t_grid: &[f64],
    stream: RandomStream,
) -> Result<TailCheck, SampleError> {
    if !params.dist.is_absolutely_continuous() {
        return Err(SampleError::UnsupportedDistribution(
            "the tail check needs a bounded directional density",
        ));
    }
    let mut rng = stream.rng();
    let mut phis: Vec<f64> = Vec::with_capacity(1024);
    let mut accepted = 0u64;
    while accepted < n_tuples {
        let mut dirs = Vec::with_capacity(params.dim + 1);
        for _ in 0..=params.dim {
            dirs.push(params.dist.sample_in_dim(params.dim, &mut rng)?);
        }
        let tuple = DirectionTuple::new(dirs).map_err(SampleError::Degenerate)?;
        if tuple.spanning_verdict() != SpanningVerdict::Spanning {
            continue;
        }
        accepted += 1;
        let Ok(cell) = tuple.tangent_simplex() else { continue };
        let Ok(phi) = functionals::phi_content(&cell, &params.dist) else { continue };
        phis.push(phi);
    }
    let n = phis.len() as f64;
    let min_phi = phis.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut pts = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let hits = phis.iter().filter(|&&p| p > t).count() as f64;
        let survival = hits / n;
        let se = (survival * (1.0 - survival) / n).sqrt();
        pts.push((t, survival, se));
    }
    let fit = fit_decay_rate(&pts).map_err(|_| {
        SampleError::UnsupportedDistribution("tail grid left fewer than 4 usable survival points")
    })?;
    let bound_ok = fit.slope <= -1.0 + 0.1;
    Ok(TailCheck {
        points: pts
            .iter()
            .map(|(t, s, _)| TailPoint { t: *t, survival: *s, bound_ok })
            .collect(),
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        min_phi,
        n_tuples,
    })
}
