//! Experiment orchestration: deterministic parallel sampling campaigns, the
//! per-experiment estimator pipelines, registered checks and output emission.
//!
//! Parallelism is by stream chunk: every chunk's output is a pure function of
//! `(seed, stream)`, chunks are merged in stream order, and round sizes are
//! constants, so identical `(config, seed)` produce identical data files for
//! every worker count.

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::directions::ProcessParams;
use crate::estimators::{
    self, fit_decay_rate, ks_vs_gamma, pearson_corr, ConditionalEstimate, FacetEvent, RateFit,
};
use crate::functionals::SizeFunctional;
use crate::samplers::{
    sample_typical_cell_inball, sample_window_tessellation, RandomStream, SampleError,
    TupleStats, TypicalCellSample, WindowStats, SLOTS_PER_STREAM,
};

use super::config::{ExperimentConfig, ExperimentKind};
use super::output::{
    write_estimates_csv, write_ratefit_json, CheckResult, EstimateRow, RunManifest, SampleSink,
};
use super::RunError;

/// Streams processed per adaptive round; a constant so that the stream layout
/// does not depend on the worker count.
const ROUND_STREAMS: u64 = 8;

/// Conditioned-sample target of the limit-shape empirical side.
const LIMIT_SHAPE_CONDITIONED: u64 = 10_000;

/// Registered drop-rate budget.
const DROP_RATE_LIMIT: f64 = 1e-6;

#[derive(Debug, Default, Clone)]
pub struct Batch {
    pub samples: Vec<TypicalCellSample>,
    pub tuple_stats: TupleStats,
    pub dropped: u64,
    pub slots: u64,
}

impl Batch {
    fn merge(&mut self, mut other: Batch) {
        self.samples.append(&mut other.samples);
        self.tuple_stats.merge(&other.tuple_stats);
        self.dropped += other.dropped;
        self.slots += other.slots;
    }
}

fn run_inball_chunk(
    params: &ProcessParams,
    a_cap: Option<f64>,
    seed: u64,
    stream: u64,
    slots: u64,
) -> Result<Batch, SampleError> {
    let mut batch = Batch::default();
    for slot in 0..slots {
        let mut rng = RandomStream::slot(seed, stream, slot).rng();
        match sample_typical_cell_inball(params, a_cap, &mut batch.tuple_stats, seed, stream, slot, &mut rng)
        {
            Ok(s) => batch.samples.push(s),
            Err(e) if e.is_droppable() => batch.dropped += 1,
            Err(e) => return Err(e),
        }
        batch.slots += 1;
    }
    Ok(batch)
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs `n_slots` inball slots starting at `start_stream`, in parallel over
/// stream chunks, merged in stream order. Returns the batch and the next
/// unused stream id.
pub fn run_inball_campaign(
    params: &ProcessParams,
    a_cap: Option<f64>,
    seed: u64,
    start_stream: u64,
    n_slots: u64,
    workers: usize,
) -> Result<(Batch, u64), SampleError> {
    let n_streams = n_slots.div_ceil(SLOTS_PER_STREAM);
    let chunks: Vec<(u64, u64)> = (0..n_streams)
        .map(|i| {
            let stream = start_stream + i;
            let slots = SLOTS_PER_STREAM.min(n_slots - i * SLOTS_PER_STREAM);
            (stream, slots)
        })
        .collect();
    let results: Vec<Result<Batch, SampleError>> = with_pool(workers, || {
        chunks
            .par_iter()
            .map(|(stream, slots)| run_inball_chunk(params, a_cap, seed, *stream, *slots))
            .collect()
    });
    let mut total = Batch::default();
    for r in results {
        total.merge(r?);
    }
    Ok((total, start_stream + n_streams))
}

/// Truncation cap implementing `{Sigma(Z)^{1/k} < a}`: the radius is capped
/// at `a / Sigma(B^d)^{1/k}` (valid by the sandwich inequality) unless the
/// event is not rare (`gamma * cap >= 1`), in which case truncation is
/// disabled and plain rejection applies.
pub fn truncation_cap(params: &ProcessParams, sigma: SizeFunctional, a: f64) -> Option<f64> {
    let k = sigma.degree(params.dim);
    let cap = a / sigma.unit_ball_value(params.dim).powf(1.0 / k);
    if params.gamma * cap < 1.0 {
        Some(cap)
    } else {
        None
    }
}

/// Adds fixed-size rounds of streams until at least `min_conditioned` samples
/// satisfy `Sigma^{1/k} < a`. Returns the batch, the cap used and the next
/// unused stream id.
pub fn run_conditioned_campaign(
    params: &ProcessParams,
    sigma: SizeFunctional,
    a: f64,
    min_conditioned: u64,
    seed: u64,
    start_stream: u64,
    workers: usize,
) -> Result<(Batch, Option<f64>, u64), SampleError> {
    let cap = truncation_cap(params, sigma, a);
    let mut batch = Batch::default();
    let mut stream = start_stream;
    let mut conditioned = 0u64;
    let mut rounds = 0u32;
    while conditioned < min_conditioned {
        rounds += 1;
        if rounds > 4000 {
            return Err(SampleError::RejectionStall);
        }
        let (round, next) = run_inball_campaign(
            params,
            cap,
            seed,
            stream,
            ROUND_STREAMS * SLOTS_PER_STREAM,
            workers,
        )?;
        stream = next;
        conditioned += round
            .samples
            .iter()
            .filter(|s| s.sigma_root(sigma) < a)
            .count() as u64;
        batch.merge(round);
    }
    Ok((batch, cap, stream))
}

/// Window campaign: one window per stream, rounds of fixed size until at
/// least `min_cells` cells are retained.
pub fn run_window_campaign(
    params: &ProcessParams,
    window_r: f64,
    seed: u64,
    start_stream: u64,
    min_cells: u64,
    workers: usize,
) -> Result<(Vec<TypicalCellSample>, WindowStats, u64), SampleError> {
    let mut all = Vec::new();
    let mut stats = WindowStats::default();
    let mut stream = start_stream;
    let mut rounds = 0u32;
    while (all.len() as u64) < min_cells {
        rounds += 1;
        if rounds > 4000 {
            return Err(SampleError::RejectionStall);
        }
        let streams: Vec<u64> = (stream..stream + ROUND_STREAMS).collect();
        let results: Vec<Result<(Vec<TypicalCellSample>, WindowStats), SampleError>> =
            with_pool(workers, || {
                streams
                    .par_iter()
                    .map(|&s| {
                        let mut wstats = WindowStats::default();
                        let mut rng = RandomStream::slot(seed, s, 0).rng();
                        let cells = sample_window_tessellation(
                            params, window_r, &mut wstats, seed, s, 0, &mut rng,
                        )?;
                        Ok((cells, wstats))
                    })
                    .collect()
            });
        for r in results {
            let (mut cells, wstats) = r?;
            all.append(&mut cells);
            stats.lines += wstats.lines;
            stats.cells_total += wstats.cells_total;
            stats.cells_retained += wstats.cells_retained;
            stats.degenerate_splits += wstats.degenerate_splits;
            stats.dropped_cells += wstats.dropped_cells;
        }
        stream += ROUND_STREAMS;
    }
    Ok((all, stats, stream))
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct ExperimentOutput {
    rows: Vec<EstimateRow>,
    ratefit: Option<(String, RateFit)>,
    checks: Vec<CheckResult>,
    tuple_stats: TupleStats,
    dropped: u64,
    slots: u64,
}

fn binomial_se(est: &ConditionalEstimate) -> f64 {
    (est.p_hat * (1.0 - est.p_hat) / est.denominator_count as f64)
        .sqrt()
        .max(1e-12)
}

fn drop_rate_check(dropped: u64, slots: u64) -> CheckResult {
    let rate = if slots == 0 { 0.0 } else { dropped as f64 / slots as f64 };
    CheckResult::new(
        "drop_rate",
        rate < DROP_RATE_LIMIT,
        rate,
        DROP_RATE_LIMIT,
        format!("{dropped} degenerate slots of {slots}"),
    )
}

fn run_complementary(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
) -> Result<ExperimentOutput, RunError> {
    let (batch, _) = run_inball_campaign(params, None, cfg.seed, 0, cfg.n_samples, cfg.workers)?;
    sink.write_all(&batch.samples)?;
    let run_id = cfg.run_id();
    let d = params.dim;
    let mut rows = Vec::new();
    let mut checks = vec![drop_rate_check(batch.dropped, batch.slots)];

    // Facet distribution rows (unconditioned: a = infinity).
    let max_f = batch.samples.iter().map(|s| s.fcount).max().unwrap_or(d + 1);
    for n in (d + 1)..=max_f {
        let count = batch.samples.iter().filter(|s| s.fcount == n).count() as u64;
        if count == 0 {
            continue;
        }
        let (lo, hi) = estimators::wilson_interval(count, batch.samples.len() as u64);
        rows.push(EstimateRow {
            experiment_id: run_id.clone(),
            theorem_tag: "facet_distribution".into(),
            sigma: String::new(),
            a: f64::INFINITY,
            n: n as u32,
            p_hat: count as f64 / batch.samples.len() as f64,
            ci_low: lo,
            ci_high: hi,
            n_samples: batch.samples.len() as u64,
            seed: cfg.seed,
        });
    }

    // Gamma law of the phi-content conditioned on the facet count.
    for (n, threshold) in [(d + 1, 0.01), (d + 2, 0.015)] {
        let values: Vec<f64> = batch
            .samples
            .iter()
            .filter(|s| s.fcount == n)
            .map(|s| s.functionals.phi_content)
            .collect();
        if values.len() < 100 {
            checks.push(CheckResult::new(
                &format!("gamma_ks_f{n}"),
                false,
                f64::NAN,
                threshold,
                format!("only {} conditioned samples", values.len()),
            ));
            continue;
        }
        let ks = ks_vs_gamma(&values, (n - d) as u32, params.gamma, 1.5);
        checks.push(CheckResult::new(
            &format!("gamma_ks_f{n}"),
            ks.statistic < threshold,
            ks.statistic,
            threshold,
            format!("n_cond = {}", values.len()),
        ));
    }

    // Independence of the phi-content and the shape summary given f = d + 1.
    let cond: Vec<&TypicalCellSample> =
        batch.samples.iter().filter(|s| s.fcount == d + 1).collect();
    if cond.len() >= 100 {
        let phis: Vec<f64> = cond.iter().map(|s| s.functionals.phi_content).collect();
        let limit = 3.0 / (cond.len() as f64).sqrt();
        for (field, name) in [
            (cond.iter().map(|s| s.summary.iso_ratio).collect::<Vec<f64>>(), "corr_phi_iso_ratio"),
            (cond.iter().map(|s| s.summary.circ_over_in).collect::<Vec<f64>>(), "corr_phi_circ_over_in"),
        ] {
            let corr = pearson_corr(&phis, &field).abs();
            checks.push(CheckResult::new(name, corr < limit, corr, limit, format!("n_cond = {}", cond.len())));
        }
    }

    Ok(ExperimentOutput {
        rows,
        checks,
        tuple_stats: batch.tuple_stats,
        dropped: batch.dropped,
        slots: batch.slots,
        ratefit: None,
    })
}

fn conditioned_grid_run(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
    sigma: SizeFunctional,
    event: FacetEvent,
    tag: &str,
) -> Result<(Vec<ConditionalEstimate>, ExperimentOutput), RunError> {
    let run_id = cfg.run_id();
    let mut grid = cfg.conditioning_grid();
    grid.sort_by(|x, y| y.total_cmp(x)); // largest a first
    let mut stream = 0u64;
    let mut out = ExperimentOutput {
        rows: Vec::new(),
        ratefit: None,
        checks: Vec::new(),
        tuple_stats: TupleStats::default(),
        dropped: 0,
        slots: 0,
    };
    let mut estimates = Vec::new();
    for &a in &grid {
        let (batch, _cap, next) = run_conditioned_campaign(
            params, sigma, a, cfg.n_samples, cfg.seed, stream, cfg.workers,
        )?;
        stream = next;
        let est = estimators::estimate_conditional_facet_event(&batch.samples, sigma, a, event)?;
        out.rows.push(EstimateRow::from_estimate(&run_id, tag, &est, cfg.seed));
        estimates.push(est);
        out.tuple_stats.merge(&batch.tuple_stats);
        out.dropped += batch.dropped;
        out.slots += batch.slots;
        sink.write_all(&batch.samples)?;
    }
    out.checks.push(drop_rate_check(out.dropped, out.slots));
    Ok((estimates, out))
}

fn run_small_cells(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
) -> Result<ExperimentOutput, RunError> {
    let sigma = cfg.sigma_functional()?;
    let n_min = params
        .dist
        .n_min(params.dim)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let (estimates, mut out) =
        conditioned_grid_run(cfg, params, sink, sigma, FacetEvent::Equals(n_min), "facet_limit")?;

    // Nondecreasing within confidence intervals along the shrinking grid.
    let mut monotone = true;
    for w in estimates.windows(2) {
        if w[1].ci_high < w[0].ci_low {
            monotone = false;
        }
    }
    out.checks.push(CheckResult::new(
        "facet_limit_monotone",
        monotone,
        if monotone { 1.0 } else { 0.0 },
        1.0,
        format!("{} grid points, sigma = {}", estimates.len(), sigma.name()),
    ));
    let last = estimates.last().expect("nonempty grid");
    out.checks.push(CheckResult::new(
        "facet_limit_final",
        last.p_hat > 0.97,
        last.p_hat,
        0.97,
        format!("a = {}, n = {}", last.a, last.n),
    ));
    Ok(out)
}

fn run_speed(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
) -> Result<ExperimentOutput, RunError> {
    let sigma = cfg.sigma_functional()?;
    let n_min = params
        .dist
        .n_min(params.dim)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let (estimates, mut out) =
        conditioned_grid_run(cfg, params, sink, sigma, FacetEvent::GreaterThan(n_min), "facet_excess")?;

    let points: Vec<(f64, f64, f64)> = estimates
        .iter()
        .map(|e| (e.a, e.p_hat, binomial_se(e)))
        .collect();
    let fit = fit_decay_rate(&points).map_err(RunError::Estimator)?;
    // The circumradius regime is linear; others may carry the log factor.
    let (lo, hi) = if sigma == SizeFunctional::Circumradius {
        (0.85, 1.15)
    } else {
        (0.70, 1.15)
    };
    out.checks.push(CheckResult::new(
        "decay_slope_range",
        fit.slope >= lo && fit.slope <= hi,
        fit.slope,
        hi,
        format!("sigma = {}, allowed [{lo}, {hi}], stderr {:.4}", sigma.name(), fit.slope_stderr),
    ));
    out.ratefit = Some((sigma.name().to_string(), fit));
    Ok(out)
}

fn run_limit_shape(cfg: &ExperimentConfig, params: &ProcessParams) -> Result<ExperimentOutput, RunError> {
    let sigma = cfg.sigma_functional()?;
    let run_id = cfg.run_id();
    let a = cfg
        .a_grid
        .as_ref()
        .and_then(|g| g.iter().cloned().reduce(f64::min))
        .unwrap_or(0.02 / params.gamma);

    let g = |s: &crate::functionals::ShapeSummary| s.iso_ratio;
    let oracle = estimators::limit_shape_ratio(
        params,
        sigma,
        &g,
        cfg.n_samples,
        RandomStream::new(cfg.seed, u64::MAX),
    )?;

    let (batch, _cap, _next) = run_conditioned_campaign(
        params,
        sigma,
        a,
        LIMIT_SHAPE_CONDITIONED,
        cfg.seed,
        0,
        cfg.workers,
    )?;
    let vals: Vec<f64> = batch
        .samples
        .iter()
        .filter(|s| s.sigma_root(sigma) < a)
        .map(|s| s.summary.iso_ratio)
        .collect();
    if vals.is_empty() {
        return Err(RunError::Estimator(estimators::EstimatorError::EmptyCondition));
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let emp_se = (var / n).sqrt();

    let joint = (oracle.stderr.powi(2) + emp_se.powi(2)).sqrt();
    let diff = (oracle.value - mean).abs();
    let mut checks = vec![
        drop_rate_check(batch.dropped, batch.slots),
        CheckResult::new(
            "limit_shape_agreement",
            diff < 3.0 * joint,
            diff,
            3.0 * joint,
            format!(
                "oracle {:.6} +- {:.6}, empirical {:.6} +- {:.6}, sigma = {}, a = {a}",
                oracle.value, oracle.stderr, mean, emp_se, sigma.name()
            ),
        ),
    ];
    if oracle.dropped > 0 {
        checks.push(CheckResult::new(
            "oracle_drop_rate",
            (oracle.dropped as f64) < DROP_RATE_LIMIT * oracle.n_tuples as f64,
            oracle.dropped as f64 / oracle.n_tuples as f64,
            DROP_RATE_LIMIT,
            format!("{} dropped tuples of {}", oracle.dropped, oracle.n_tuples),
        ));
    }

    let rows = vec![
        EstimateRow {
            experiment_id: run_id.clone(),
            theorem_tag: "limit_shape_oracle_mean_iso_ratio".into(),
            sigma: sigma.name().into(),
            a: 0.0,
            n: 0,
            p_hat: oracle.value,
            ci_low: oracle.value - 1.96 * oracle.stderr,
            ci_high: oracle.value + 1.96 * oracle.stderr,
            n_samples: cfg.n_samples,
            seed: cfg.seed,
        },
        EstimateRow {
            experiment_id: run_id,
            theorem_tag: "limit_shape_empirical_mean_iso_ratio".into(),
            sigma: sigma.name().into(),
            a,
            n: 0,
            p_hat: mean,
            ci_low: mean - 1.96 * emp_se,
            ci_high: mean + 1.96 * emp_se,
            n_samples: vals.len() as u64,
            seed: cfg.seed,
        },
    ];
    Ok(ExperimentOutput {
        rows,
        ratefit: None,
        checks,
        tuple_stats: batch.tuple_stats,
        dropped: batch.dropped,
        slots: batch.slots,
    })
}

fn run_atoms(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
) -> Result<ExperimentOutput, RunError> {
    let run_id = cfg.run_id();
    let window_r = cfg.window_r.expect("validated");
    let (samples, wstats, _next) = run_window_campaign(
        params, window_r, cfg.seed, 0, cfg.n_samples, cfg.workers,
    )?;
    sink.write_all(&samples)?;
    let n_min = params
        .dist
        .n_min(params.dim)
        .map_err(|e| RunError::Config(e.to_string()))?;

    let mut grid = match &cfg.a_grid {
        Some(g) => g.clone(),
        None => vec![0.2, 0.1, 0.05, 0.025].iter().map(|a| a / params.gamma).collect(),
    };
    grid.sort_by(|x, y| y.total_cmp(x));

    // Witness direction: the heaviest atom pair.
    let atom = params
        .dist
        .weighted_atoms()
        .into_iter()
        .max_by(|a, b| a.mass.total_cmp(&b.mass))
        .expect("atoms experiment has atoms");

    let mut rows = Vec::new();
    let mut excess = Vec::new();
    for &a in &grid {
        let est = estimators::estimate_conditional_facet_event(
            &samples,
            SizeFunctional::Inradius,
            a,
            FacetEvent::GreaterThan(n_min),
        )?;
        rows.push(EstimateRow::from_estimate(&run_id, "atoms_facet_excess", &est, cfg.seed));
        excess.push(est);
        let pf = estimators::parallel_facet_fraction(&samples, &atom.dir, a)?;
        rows.push(EstimateRow::from_estimate(&run_id, "parallel_facet_fraction", &pf, cfg.seed));
    }

    let first = &excess[0];
    let last = &excess[excess.len() - 1];
    let checks = vec![
        CheckResult::new(
            "atoms_ci_floor",
            last.ci_low > 0.02,
            last.ci_low,
            0.02,
            format!("a = {}, p_hat = {:.4}, n_cond = {}", last.a, last.p_hat, last.denominator_count),
        ),
        CheckResult::new(
            "atoms_nonvanishing",
            last.p_hat >= 0.5 * first.p_hat,
            last.p_hat,
            0.5 * first.p_hat,
            format!("first {:.4} at a = {}, last {:.4} at a = {}", first.p_hat, first.a, last.p_hat, last.a),
        ),
        CheckResult::new(
            "window_degenerate_rate",
            (wstats.degenerate_splits + wstats.dropped_cells) as f64
                <= DROP_RATE_LIMIT.max(1e-4) * wstats.cells_total.max(1) as f64,
            (wstats.degenerate_splits + wstats.dropped_cells) as f64,
            DROP_RATE_LIMIT.max(1e-4) * wstats.cells_total.max(1) as f64,
            format!("{} lines, {} cells", wstats.lines, wstats.cells_total),
        ),
    ];

    Ok(ExperimentOutput {
        rows,
        ratefit: None,
        checks,
        tuple_stats: TupleStats::default(),
        dropped: wstats.dropped_cells,
        slots: wstats.cells_total,
    })
}

fn run_tail_lemma(cfg: &ExperimentConfig, params: &ProcessParams) -> Result<ExperimentOutput, RunError> {
    let run_id = cfg.run_id();
    let grid = cfg.tail_grid();
    let check = estimators::tail_check_phi_t(
        params,
        cfg.n_samples,
        &grid,
        RandomStream::new(cfg.seed, u64::MAX),
    )?;
    let mut rows = Vec::new();
    for p in &check.points {
        let hits = (p.survival * cfg.n_samples as f64).round() as u64;
        let (lo, hi) = estimators::wilson_interval(hits, cfg.n_samples);
        rows.push(EstimateRow {
            experiment_id: run_id.clone(),
            theorem_tag: "phi_tail_survival".into(),
            sigma: "phi_content".into(),
            a: p.t,
            n: 0,
            p_hat: p.survival,
            ci_low: lo,
            ci_high: hi,
            n_samples: cfg.n_samples,
            seed: cfg.seed,
        });
    }
    let checks = vec![
        CheckResult::new(
            "tail_exponent",
            check.slope <= -0.9,
            check.slope,
            -0.9,
            format!("stderr {:.4}", check.slope_stderr),
        ),
        CheckResult::new(
            "phi_above_unit_ball",
            check.min_phi > 1.0,
            check.min_phi,
            1.0,
            format!("{} tuples", check.n_tuples),
        ),
    ];
    let fit = RateFit {
        a_grid: check.points.iter().map(|p| p.t).collect(),
        p_values: check.points.iter().map(|p| p.survival).collect(),
        slope: check.slope,
        intercept: 0.0,
        slope_stderr: check.slope_stderr,
    };
    Ok(ExperimentOutput {
        rows,
        ratefit: Some(("phi_content".into(), fit)),
        checks,
        tuple_stats: TupleStats::default(),
        dropped: 0,
        slots: cfg.n_samples,
    })
}

fn run_sample_dump(
    cfg: &ExperimentConfig,
    params: &ProcessParams,
    sink: &mut SampleSink,
) -> Result<ExperimentOutput, RunError> {
    let mut checks = Vec::new();
    let (samples, tuple_stats, dropped, slots) = if params.dist.is_absolutely_continuous() {
        let (batch, _) = run_inball_campaign(params, None, cfg.seed, 0, cfg.n_samples, cfg.workers)?;
        (batch.samples, batch.tuple_stats, batch.dropped, batch.slots)
    } else {
        let window_r = cfg.window_r.expect("validated");
        let (samples, wstats, _) =
            run_window_campaign(params, window_r, cfg.seed, 0, cfg.n_samples, cfg.workers)?;
        // d antipodal support pairs force parallelepipeds: every retained cell
        // has exactly 2d facets.
        let n_min = params
            .dist
            .n_min(params.dim)
            .map_err(|e| RunError::Config(e.to_string()))?;
        if params.dist.weighted_atoms().len() == params.dim && n_min == 2 * params.dim {
            let off = samples.iter().filter(|s| s.fcount != n_min).count();
            checks.push(CheckResult::new(
                "parallelepiped_exactness",
                off == 0,
                off as f64,
                0.0,
                format!("n_min = {n_min}, {} cells", samples.len()),
            ));
        }
        (samples, TupleStats::default(), wstats.dropped_cells, wstats.cells_total)
    };
    checks.push(drop_rate_check(dropped, slots));
    sink.write_all(&samples)?;
    Ok(ExperimentOutput {
        rows: Vec::new(),
        ratefit: None,
        checks,
        tuple_stats,
        dropped,
        slots,
    })
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Executes the configured experiment, writes every output file and returns
/// the manifest. The caller decides the exit status from
/// [`RunManifest::all_passed`].
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest, RunError> {
    let params = cfg.build_params()?;
    let started = now_unix();
    std::fs::create_dir_all(&cfg.output_dir)?;

    let mut sink = SampleSink::default();
    let out = match cfg.experiment {
        ExperimentKind::Complementary => run_complementary(cfg, &params, &mut sink)?,
        ExperimentKind::SmallCells => run_small_cells(cfg, &params, &mut sink)?,
        ExperimentKind::Speed => run_speed(cfg, &params, &mut sink)?,
        ExperimentKind::LimitShape => run_limit_shape(cfg, &params)?,
        ExperimentKind::Atoms => run_atoms(cfg, &params, &mut sink)?,
        ExperimentKind::TailLemma => run_tail_lemma(cfg, &params)?,
        ExperimentKind::SampleDump => run_sample_dump(cfg, &params, &mut sink)?,
    };

    let dir = std::path::Path::new(&cfg.output_dir);
    let mut files = Vec::new();
    let samples_emitted = sink.count();
    if samples_emitted > 0 {
        let buf = sink.into_bytes();
        std::fs::write(dir.join("samples.jsonl"), &buf)?;
        files.push(("samples.jsonl".to_string(), super::output::sha256_hex(&buf)));
    }
    {
        let mut buf = Vec::new();
        write_estimates_csv(&mut buf, &out.rows)?;
        std::fs::write(dir.join("estimates.csv"), &buf)?;
        files.push(("estimates.csv".to_string(), super::output::sha256_hex(&buf)));
    }
    if let Some((sigma, fit)) = &out.ratefit {
        let mut buf = Vec::new();
        write_ratefit_json(&mut buf, &cfg.run_id(), sigma, fit)?;
        std::fs::write(dir.join("ratefit.json"), &buf)?;
        files.push(("ratefit.json".to_string(), super::output::sha256_hex(&buf)));
    }

    let manifest = RunManifest {
        run_id: cfg.run_id(),
        config_hash: cfg.config_hash(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: cfg.experiment.name().to_string(),
        seed: cfg.seed,
        workers: cfg.workers,
        started_unix: started,
        finished_unix: now_unix(),
        samples_emitted,
        slots_processed: out.slots,
        dropped_degenerate: out.dropped,
        marginal_spanning: out.tuple_stats.marginal,
        tuple_proposals: out.tuple_stats.proposals,
        tuple_accepted: out.tuple_stats.accepted,
        checks: out.checks,
        files,
    };
    let mut buf = Vec::new();
    manifest.write_json(&mut buf)?;
    std::fs::write(dir.join("manifest.json"), &buf)?;
    Ok(manifest)
}

/// Like [`run`], but reports failed registered checks as an error.
pub fn run_checked(cfg: &ExperimentConfig) -> Result<RunManifest, RunError> {
    let manifest = run(cfg)?;
    let failed = manifest.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(RunError::CheckFailed { failed, total: manifest.checks.len() });
    }
    Ok(manifest)
}

/// Renders one line per registered check.
pub fn format_check_report(manifest: &RunManifest) -> String {
    let mut s = String::new();
    for c in &manifest.checks {
        s.push_str(&format!(
            "check {:<28} {}  value={:.6e} threshold={:.6e}  {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.value,
            c.threshold,
            c.detail
        ));
    }
    s
}
