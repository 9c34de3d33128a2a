//! Goodness-of-fit machinery: Kolmogorov-Smirnov against Gamma laws,
//! two-sample tests, correlation and multiple-testing helpers.

use statrs::function::gamma::{gamma_lr, gamma_ur};

/// One-sample KS outcome against a fixed reference law.
#[derive(Debug, Clone, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n_samples: usize,
    pub threshold_5pct: f64,
    pub pass: bool,
}

/// Regularized lower incomplete gamma: CDF of Gamma(shape, rate) at `x`.
pub fn gamma_cdf(shape: f64, rate: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(shape, rate * x)
    }
}

/// Exact KS statistic of the sample against a continuous CDF.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max(f - i as f64 / n);
        d = d.max((i + 1) as f64 / n - f);
    }
    d
}

/// KS test of positive values against Gamma(shape, rate) with shape
/// `n - d >= 1`. `pass` holds iff the statistic is below
/// `tolerance_factor * 1.36 / sqrt(n)`.
pub fn ks_vs_gamma(values: &[f64], shape_n_minus_d: u32, gamma: f64, tolerance_factor: f64) -> KsResult {
    assert!(shape_n_minus_d >= 1);
    let statistic = ks_statistic(values, |x| gamma_cdf(shape_n_minus_d as f64, gamma, x));
    let n_samples = values.len();
    let threshold_5pct = 1.36 / (n_samples as f64).sqrt();
    KsResult { statistic, n_samples, threshold_5pct, pass: statistic < tolerance_factor * threshold_5pct }
}

/// Survival function of the Kolmogorov distribution,
/// `Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS statistic, the 5 percent threshold
/// `1.358 sqrt((n+m)/(nm))`, and the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let mut d = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let eff = (n * m / (n + m)).sqrt();
    (d, 1.358 / eff, kolmogorov_sf(eff * d))
}

/// Pearson correlation coefficient.
pub fn pearson_corr(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Two-sample chi-square on matched histogram bins; returns the statistic,
/// the degrees of freedom (bins with events minus one) and the p-value.
pub fn chi_square_two_sample(counts_a: &[u64], counts_b: &[u64]) -> (f64, usize, f64) {
    assert_eq!(counts_a.len(), counts_b.len());
    let tot_a: u64 = counts_a.iter().sum();
    let tot_b: u64 = counts_b.iter().sum();
    let grand = (tot_a + tot_b) as f64;
    let mut stat = 0.0;
    let mut used = 0usize;
    for (&oa, &ob) in counts_a.iter().zip(counts_b) {
        let row = (oa + ob) as f64;
        if row == 0.0 {
            continue;
        }
        used += 1;
        let ea = row * tot_a as f64 / grand;
        let eb = row * tot_b as f64 / grand;
        stat += (oa as f64 - ea).powi(2) / ea + (ob as f64 - eb).powi(2) / eb;
    }
    let df = used.saturating_sub(1).max(1);
    let p = gamma_ur(df as f64 / 2.0, stat / 2.0);
    (stat, df, p)
}

/// Holm step-down at family level `alpha`: true iff no hypothesis in the
/// family is rejected.
pub fn holm_all_pass(p_values: &[f64], alpha: f64) -> bool {
    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    for (i, p) in sorted.iter().enumerate() {
        if *p <= alpha / (m - i) as f64 {
            return false;
        }
    }
    true
}
