//! Log-log decay-rate fits for the conditional facet-excess probabilities.

use super::EstimatorError;

/// Weighted least squares of `ln p` against `ln a`. A slope near one is the
/// linear-decay regime; a logarithmic correction drags the finite-grid slope
/// below one.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub a_grid: Vec<f64>,
    pub p_values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

/// Fits `(a, p_hat, stderr)` triples on the log-log scale. Points with
/// nonpositive or nonfinite `p_hat` are unusable; fewer than four usable
/// points is a degenerate grid. Zero standard errors fall back to an
/// ordinary (residual-based) fit.
pub fn fit_decay_rate(points: &[(f64, f64, f64)]) -> Result<RateFit, EstimatorError> {
    let usable: Vec<&(f64, f64, f64)> = points
        .iter()
        .filter(|(a, p, _)| *a > 0.0 && *p > 0.0 && p.is_finite())
        .collect();
    if usable.len() < 4 {
        return Err(EstimatorError::DegenerateGrid);
    }
    let xs: Vec<f64> = usable.iter().map(|(a, _, _)| a.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|(_, p, _)| p.ln()).collect();
    let weighted = usable.iter().all(|(_, _, se)| *se > 0.0);
    let ws: Vec<f64> = if weighted {
        // Delta method: se(ln p) = se(p) / p.
        usable.iter().map(|(_, p, se)| (p / se).powi(2)).collect()
    } else {
        vec![1.0; usable.len()]
    };

    let wsum: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let ybar = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let sxx: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (x - xbar).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .zip(&ws)
        .map(|((x, y), w)| w * (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let slope_stderr = if weighted {
        (1.0 / sxx).sqrt()
    } else {
        let rss: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (rss / (usable.len() as f64 - 2.0) / sxx).sqrt()
    };

    Ok(RateFit {
        a_grid: usable.iter().map(|(a, _, _)| *a).collect(),
        p_values: usable.iter().map(|(_, p, _)| *p).collect(),
        slope,
        intercept,
        slope_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric_grid(hi: f64, lo: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| hi * (lo / hi).powf(j as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn linear_model_has_unit_slope() {
        let pts: Vec<(f64, f64, f64)> = geometric_grid(0.2, 0.00625, 6)
            .into_iter()
            .map(|a| (a, 0.3 * a, 0.0))
            .collect();
        let fit = fit_decay_rate(&pts).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-9, "slope {}", fit.slope);
        assert!((fit.intercept - 0.3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn quadratic_model_has_slope_two() {
        let pts: Vec<(f64, f64, f64)> = geometric_grid(0.2, 0.00625, 6)
            .into_iter()
            .map(|a| (a, 0.7 * a * a, 0.0))
            .collect();
        let fit = fit_decay_rate(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9, "slope {}", fit.slope);
    }

    #[test]
    fn log_factor_drags_the_slope_below_one() {
        // p(a) = 0.3 a ln(1/a) on a geometric grid inside [1e-3, 1e-1].
        let pts: Vec<(f64, f64, f64)> = geometric_grid(1e-1, 1e-3, 6)
            .into_iter()
            .map(|a| (a, 0.3 * a * (1.0 / a).ln(), 0.0))
            .collect();
        let fit = fit_decay_rate(&pts).unwrap();
        assert!(
            fit.slope > 0.75 && fit.slope < 1.0,
            "expected the log-depressed slope in (0.75, 1), got {}",
            fit.slope
        );
    }

    #[test]
    fn degenerate_grids_are_rejected() {
        let pts = [(0.1, 0.01, 0.001), (0.05, 0.005, 0.001), (0.025, 0.0, 0.001), (0.0125, -1.0, 0.001)];
        assert!(matches!(fit_decay_rate(&pts), Err(EstimatorError::DegenerateGrid)));
    }

    #[test]
    fn weighted_fit_reports_finite_stderr() {
        let pts: Vec<(f64, f64, f64)> = geometric_grid(0.2, 0.00625, 6)
            .into_iter()
            .map(|a| (a, 0.3 * a, 0.02 * 0.3 * a))
            .collect();
        let fit = fit_decay_rate(&pts).unwrap();
        assert!(fit.slope_stderr > 0.0 && fit.slope_stderr < 0.05);
    }
}
