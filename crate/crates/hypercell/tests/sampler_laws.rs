//! Statistical laws of the two samplers and the estimator layer, checked at
//! moderate sample sizes: cross-sampler agreement, exact conditioning via
//! truncation, the Gamma law in dimension 3, and the weighted facet/shape
//! measure identities.

mod common;

use hypercell::cli::{run_conditioned_campaign, run_inball_campaign, run_window_campaign};
use hypercell::directions::{DirectionalDistribution, ProcessParams};
use hypercell::estimators::{
    self, chi_square_two_sample, estimate_mu_n_s, estimate_mu_n_s_sigma, holm_all_pass,
    ks_two_sample, ks_vs_gamma,
};
use hypercell::functionals::SizeFunctional;
use hypercell::samplers::TypicalCellSample;

fn iso_params(dim: usize) -> ProcessParams {
    ProcessParams::new(1.0, dim, DirectionalDistribution::isotropic()).unwrap()
}

fn fcount_bins(samples: &[TypicalCellSample]) -> [u64; 4] {
    let mut bins = [0u64; 4];
    for s in samples {
        let k = match s.fcount {
            3 => 0,
            4 => 1,
            5 => 2,
            _ => 3,
        };
        bins[k] += 1;
    }
    bins
}

#[test]
fn window_and_inball_samplers_agree() {
    let params = iso_params(2);
    let (inball, _) = run_inball_campaign(&params, None, 101, 0, 40_000, 4).unwrap();
    assert!(inball.dropped == 0, "dropped {}", inball.dropped);
    let (window, stats, _) = run_window_campaign(&params, 50.0, 102, 0, 30_000, 4).unwrap();
    assert!(stats.degenerate_splits == 0);

    // Classical planar identity: the typical cell has 4 facets on average.
    let mean_f =
        window.iter().map(|s| s.fcount as f64).sum::<f64>() / window.len() as f64;
    let se = (window.len() as f64).sqrt().recip() * 1.5; // sd(f) is about 1
    assert!((mean_f - 4.0).abs() < 4.0 * se, "window mean facet count {mean_f}");
    let mean_f_in =
        inball.samples.iter().map(|s| s.fcount as f64).sum::<f64>() / inball.samples.len() as f64;
    assert!(
        (mean_f - mean_f_in).abs() < 6.0 * se,
        "cross-sampler facet means {mean_f} vs {mean_f_in}"
    );

    // Shared one-dimensional statistics agree at the 5 percent level with a
    // Holm correction across the family.
    let pull = |s: &TypicalCellSample| {
        (
            s.functionals.phi_content,
            s.functionals.inradius,
            s.functionals.circumradius,
        )
    };
    let a: Vec<(f64, f64, f64)> = inball.samples.iter().map(pull).collect();
    let b: Vec<(f64, f64, f64)> = window.iter().map(pull).collect();
    let mut p_values = Vec::new();
    for (name, fa, fb) in [
        ("phi", a.iter().map(|t| t.0).collect::<Vec<f64>>(), b.iter().map(|t| t.0).collect::<Vec<f64>>()),
        ("inradius", a.iter().map(|t| t.1).collect(), b.iter().map(|t| t.1).collect()),
        ("circumradius", a.iter().map(|t| t.2).collect(), b.iter().map(|t| t.2).collect()),
    ] {
        let (d, _, p) = ks_two_sample(&fa, &fb);
        eprintln!("cross-sampler KS {name}: d = {d:.4}, p = {p:.3}");
        p_values.push(p);
    }
    let (stat, df, p_chi) = chi_square_two_sample(&fcount_bins(&inball.samples), &fcount_bins(&window));
    eprintln!("cross-sampler fcount chi-square: {stat:.2} (df {df}), p = {p_chi:.3}");
    p_values.push(p_chi);
    assert!(holm_all_pass(&p_values, 0.05), "family p-values {p_values:?}");
}

#[test]
fn truncation_matches_conditioning() {
    // The capped sampler's law equals the uncapped law conditioned on the
    // radius staying below the cap.
    let params = iso_params(2);
    let cap = 0.05;
    let (capped, _) = run_inball_campaign(&params, Some(cap), 201, 0, 20_000, 4).unwrap();
    assert!(capped.samples.iter().all(|s| s.functionals.inradius < cap));

    let (free, _) = run_inball_campaign(&params, None, 202, 0, 400_000, 4).unwrap();
    let conditioned: Vec<f64> = free
        .samples
        .iter()
        .filter(|s| s.inball_r < cap)
        .map(|s| s.functionals.phi_content)
        .collect();
    let capped_phi: Vec<f64> = capped.samples.iter().map(|s| s.functionals.phi_content).collect();
    assert!(conditioned.len() > 5_000, "{} conditioned", conditioned.len());
    let (d, thresh, p) = ks_two_sample(&capped_phi, &conditioned);
    eprintln!("conditioning-consistency KS on phi: d = {d:.4} (threshold {thresh:.4}), p = {p:.3}");
    assert!(d < thresh, "KS {d} vs {thresh}");
}

#[test]
fn gamma_law_holds_in_dimension_three() {
    let params = iso_params(3);
    let (batch, _) = run_inball_campaign(&params, None, 301, 0, 50_000, 4).unwrap();
    let drop_rate = batch.dropped as f64 / batch.slots as f64;
    assert!(drop_rate < 1e-3, "3d drop rate {drop_rate}");
    let phi4: Vec<f64> = batch
        .samples
        .iter()
        .filter(|s| s.fcount == 4)
        .map(|s| s.functionals.phi_content)
        .collect();
    assert!(phi4.len() > 5_000);
    let ks = ks_vs_gamma(&phi4, 1, 1.0, 1.5);
    eprintln!("3d gamma KS (f = 4): {:.4} vs {:.4}", ks.statistic, ks.threshold_5pct);
    assert!(ks.pass, "KS {} threshold {}", ks.statistic, ks.threshold_5pct);

    // Minimal facet count: simplices dominate small cells, and every cell
    // keeps at least d+1 facets.
    assert!(batch.samples.iter().all(|s| s.fcount >= 4));
}

#[test]
fn weighted_measure_identities_and_limit_ratio() {
    let params = iso_params(2);
    let (batch, _) = run_inball_campaign(&params, None, 401, 0, 150_000, 4).unwrap();
    let samples = &batch.samples;
    let everything = |_: &hypercell::functionals::ShapeSummary| true;

    // Total mass: summing the facet/shape measure over all observed facet
    // counts recovers probability one.
    let mut total = 0.0;
    let mut var = 0.0;
    let max_f = samples.iter().map(|s| s.fcount).max().unwrap();
    for n in 3..=max_f {
        if let Ok((p, se)) = estimate_mu_n_s(samples, n, &everything) {
            total += p;
            var += se * se;
        }
    }
    assert!((total - 1.0).abs() <= 3.0 * var.sqrt().max(1e-9), "total mass {total}");

    // (n - d)! mu_{n,s,Phi} = mu_{n,s}: the phi-weight on normalized shapes
    // is identically one.
    for n in [3usize, 4, 5] {
        let (mu, _) = estimate_mu_n_s(samples, n, &everything).unwrap();
        let (mu_phi, _) = estimate_mu_n_s_sigma(samples, n, &everything, SizeFunctional::PhiContent).unwrap();
        let mut fact = 1.0;
        for j in 2..=(n - 2) {
            fact *= j as f64;
        }
        assert!(
            (fact * mu_phi - mu).abs() < 1e-12,
            "n = {n}: {mu} vs (n-d)! {mu_phi}"
        );
    }

    // The conditional excess probability normalized by gamma a approaches
    // the ratio of the circumradius-weighted measures.
    let sigma = SizeFunctional::Circumradius;
    let (mu3, se3) = estimate_mu_n_s_sigma(samples, 3, &everything, sigma).unwrap();
    let (mu4, se4) = estimate_mu_n_s_sigma(samples, 4, &everything, sigma).unwrap();
    let ratio = mu4 / mu3;
    let ratio_se = ratio * ((se3 / mu3).powi(2) + (se4 / mu4).powi(2)).sqrt();

    let a = 0.0125;
    let (cond, _cap, _) =
        run_conditioned_campaign(&params, sigma, a, 30_000, 402, 0, 4).unwrap();
    let est = estimators::estimate_conditional_facet_event(
        &cond.samples,
        sigma,
        a,
        estimators::FacetEvent::GreaterThan(3),
    )
    .unwrap();
    let lhs = est.p_hat / a;
    let lhs_se = (est.p_hat * (1.0 - est.p_hat) / est.denominator_count as f64).sqrt() / a;
    let joint = (lhs_se * lhs_se + ratio_se * ratio_se).sqrt();
    eprintln!(
        "limit ratio: empirical {lhs:.4} +- {lhs_se:.4}, measure ratio {ratio:.4} +- {ratio_se:.4}"
    );
    // The finite-a correction is O(a ln a); allow it on top of the noise.
    let bias_allowance = 0.35 * lhs;
    assert!(
        (lhs - ratio).abs() <= 3.0 * joint + bias_allowance,
        "empirical {lhs} vs ratio {ratio} (joint se {joint})"
    );
}

#[test]
fn estimators_are_deterministic_under_shuffling() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let params = iso_params(2);
    let (batch, _) = run_inball_campaign(&params, None, 501, 0, 5_000, 2).unwrap();
    let sigma = SizeFunctional::Circumradius;
    let base = estimators::estimate_conditional_facet_prob(&batch.samples, sigma, 0.5, 3).unwrap();
    let mut shuffled = batch.samples.clone();
    shuffled.shuffle(&mut rand_chacha::ChaCha12Rng::seed_from_u64(9));
    let again = estimators::estimate_conditional_facet_prob(&shuffled, sigma, 0.5, 3).unwrap();
    assert_eq!(base.numerator_count, again.numerator_count);
    assert_eq!(base.denominator_count, again.denominator_count);
    assert_eq!(base.p_hat, again.p_hat);
    assert_eq!(base.ci_low, again.ci_low);
}

#[test]
fn incompatible_conditioning_is_rejected() {
    let params = iso_params(2);
    let (batch, _cap, _) = run_conditioned_campaign(
        &params,
        SizeFunctional::Circumradius,
        0.05,
        2_000,
        601,
        0,
        2,
    )
    .unwrap();
    // Asking about a larger conditioning event than the truncation allows
    // must fail rather than silently bias.
    let err = estimators::estimate_conditional_facet_prob(
        &batch.samples,
        SizeFunctional::Circumradius,
        0.5,
        3,
    )
    .unwrap_err();
    assert_eq!(err, estimators::EstimatorError::IncompatibleConditioning);
    // The compatible question works.
    estimators::estimate_conditional_facet_prob(&batch.samples, SizeFunctional::Circumradius, 0.05, 3)
        .unwrap();
}
