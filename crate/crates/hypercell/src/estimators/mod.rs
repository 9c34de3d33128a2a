//! Statistical verification layer: conditional probabilities with Wilson
//! intervals, empirical facet/shape measures, goodness-of-fit tests, decay
//! fits and tuple-integral oracles. Every estimator is a deterministic
//! function of its sample list.

pub mod gof;
pub mod oracle;
pub mod ratefit;

pub use gof::{
    chi_square_two_sample, gamma_cdf, holm_all_pass, kolmogorov_sf, ks_statistic, ks_two_sample,
    ks_vs_gamma, pearson_corr, KsResult,
};
pub use oracle::{limit_shape_oracle, limit_shape_ratio, tail_check_phi_t, OracleEstimate, TailCheck, TailPoint};
pub use ratefit::{fit_decay_rate, RateFit};

use crate::functionals::{ShapeSummary, SizeFunctional};
use crate::geometry::{ConvexCell, UnitVector};
use crate::samplers::TypicalCellSample;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimatorError {
    #[error("conditioning event is empty")]
    EmptyCondition,
    #[error("rate fit needs at least 4 usable grid points")]
    DegenerateGrid,
    #[error("samples were conditioned more tightly than the requested event")]
    IncompatibleConditioning,
}

/// A conditional probability estimate with a Wilson 95 percent interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEstimate {
    pub numerator_count: u64,
    pub denominator_count: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub a: f64,
    pub sigma_name: String,
    pub n: u32,
}

const Z_95: f64 = 1.959963984540054;

/// Wilson 95 percent interval for `successes / trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Facet-count event in the conditional estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetEvent {
    Equals(usize),
    GreaterThan(usize),
}

impl FacetEvent {
    fn holds(&self, fcount: usize) -> bool {
        match self {
            FacetEvent::Equals(n) => fcount == *n,
            FacetEvent::GreaterThan(n) => fcount > *n,
        }
    }

    fn label(&self) -> u32 {
        match self {
            FacetEvent::Equals(n) | FacetEvent::GreaterThan(n) => *n as u32,
        }
    }
}

fn check_conditioning_compat(
    samples: &[TypicalCellSample],
    sigma: SizeFunctional,
    a: f64,
) -> Result<(), EstimatorError> {
    for s in samples {
        if let Some(cap) = s.conditioned_a {
            let dim = s.cell.dim();
            let needed = a / sigma.unit_ball_value(dim).powf(1.0 / sigma.degree(dim));
            if cap < needed * (1.0 - 1e-12) {
                return Err(EstimatorError::IncompatibleConditioning);
            }
        }
    }
    Ok(())
}

/// `P(facet event | Sigma(Z)^{1/k} < a)` over samples drawn compatibly with
/// the conditioning (unconditioned, or radius-truncated no tighter than the
/// event allows).
pub fn estimate_conditional_facet_event(
    samples: &[TypicalCellSample],
    sigma: SizeFunctional,
    a: f64,
    event: FacetEvent,
) -> Result<ConditionalEstimate, EstimatorError> {
    check_conditioning_compat(samples, sigma, a)?;
    let mut den = 0u64;
    let mut num = 0u64;
    for s in samples {
        if s.sigma_root(sigma) < a {
            den += 1;
            if event.holds(s.fcount) {
                num += 1;
            }
        }
    }
    if den == 0 {
        return Err(EstimatorError::EmptyCondition);
    }
    let (ci_low, ci_high) = wilson_interval(num, den);
    Ok(ConditionalEstimate {
        numerator_count: num,
        denominator_count: den,
        p_hat: num as f64 / den as f64,
        ci_low,
        ci_high,
        a,
        sigma_name: sigma.name().to_string(),
        n: event.label(),
    })
}

/// `P(f(Z) = n | Sigma(Z)^{1/k} < a)`.
pub fn estimate_conditional_facet_prob(
    samples: &[TypicalCellSample],
    sigma: SizeFunctional,
    a: f64,
    n: usize,
) -> Result<ConditionalEstimate, EstimatorError> {
    estimate_conditional_facet_event(samples, sigma, a, FacetEvent::Equals(n))
}

fn require_unconditioned(samples: &[TypicalCellSample]) -> Result<(), EstimatorError> {
    if samples.iter().any(|s| s.conditioned_a.is_some()) {
        return Err(EstimatorError::IncompatibleConditioning);
    }
    Ok(())
}

/// Plug-in estimate of `P(f(Z) = n, shape in S)` with its standard error.
pub fn estimate_mu_n_s(
    samples: &[TypicalCellSample],
    n: usize,
    s_pred: &dyn Fn(&ShapeSummary) -> bool,
) -> Result<(f64, f64), EstimatorError> {
    require_unconditioned(samples)?;
    let total = samples.len() as f64;
    let hits = samples
        .iter()
        .filter(|s| s.fcount == n && s_pred(&s.summary))
        .count() as f64;
    if hits == 0.0 {
        return Err(EstimatorError::EmptyCondition);
    }
    let p = hits / total;
    Ok((p, (p * (1.0 - p) / total).sqrt()))
}

/// The size-weighted facet/shape measure
/// `(1/(n-d)!) E[ 1{f = n, shape in S} Sigma(shape(Z))^{-(n-d)/k} ]`,
/// with the functional evaluated on the normalized body via homogeneity.
pub fn estimate_mu_n_s_sigma(
    samples: &[TypicalCellSample],
    n: usize,
    s_pred: &dyn Fn(&ShapeSummary) -> bool,
    sigma: SizeFunctional,
) -> Result<(f64, f64), EstimatorError> {
    require_unconditioned(samples)?;
    if samples.is_empty() {
        return Err(EstimatorError::EmptyCondition);
    }
    let dim = samples[0].cell.dim();
    let k = sigma.degree(dim);
    let power = (n as f64 - dim as f64) / k;
    let mut fact = 1.0;
    for j in 2..=(n - dim) {
        fact *= j as f64;
    }
    let total = samples.len() as f64;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut hits = 0u64;
    for s in samples {
        if s.fcount == n && s_pred(&s.summary) {
            hits += 1;
            // Sigma(shape(Z)) = Sigma(Z) / Phi(Z)^k by homogeneity and
            // translation invariance.
            let sigma_shape = s.functionals.get(sigma) / s.functionals.phi_content.powf(k);
            let w = sigma_shape.powf(-power) / fact;
            sum += w;
            sumsq += w * w;
        }
    }
    if hits == 0 {
        return Err(EstimatorError::EmptyCondition);
    }
    let mean = sum / total;
    let var = (sumsq / total - mean * mean).max(0.0);
    Ok((mean, (var / total).sqrt()))
}

/// True iff the cell has two parallel facets orthogonal to `u` whose slab
/// width is below `a`. Facet normals are matched to the atom direction up to
/// an angular tolerance tight enough to be exact for sampled atoms.
pub fn has_parallel_slab(cell: &ConvexCell, u: &UnitVector, a: f64) -> bool {
    let mut aligned: Option<f64> = None;
    let mut opposite: Option<f64> = None;
    for h in cell.halfspaces() {
        let d = h.normal().dot_unit(u);
        if d >= 1.0 - 1e-12 {
            aligned = Some(aligned.map_or(h.bound(), |b: f64| b.min(h.bound())));
        } else if d <= -1.0 + 1e-12 {
            opposite = Some(opposite.map_or(h.bound(), |b: f64| b.min(h.bound())));
        }
    }
    match (aligned, opposite) {
        (Some(b1), Some(b2)) => b1 + b2 < a,
        _ => false,
    }
}

/// Conditional fraction of cells in the parallel-slab event `A_{u,a}` among
/// cells with inradius below `a`; the witness statistic for atomic
/// directional distributions.
pub fn parallel_facet_fraction(
    samples: &[TypicalCellSample],
    u: &UnitVector,
    a: f64,
) -> Result<ConditionalEstimate, EstimatorError> {
    let mut den = 0u64;
    let mut num = 0u64;
    for s in samples {
        if s.functionals.inradius < a {
            den += 1;
            if has_parallel_slab(&s.cell, u, a) {
                num += 1;
            }
        }
    }
    if den == 0 {
        return Err(EstimatorError::EmptyCondition);
    }
    let (ci_low, ci_high) = wilson_interval(num, den);
    Ok(ConditionalEstimate {
        numerator_count: num,
        denominator_count: den,
        p_hat: num as f64 / den as f64,
        ci_low,
        ci_high,
        a,
        sigma_name: "inradius".to_string(),
        n: 0,
    })
}
