//! Deterministic output emission: JSON-lines samples, estimate CSV, rate-fit
//! JSON and the run manifest. All floats carry 17 significant digits so
//! replays are byte-identical.

use std::io::Write;

use sha2::{Digest, Sha256};

use crate::estimators::{ConditionalEstimate, RateFit};
use crate::samplers::TypicalCellSample;

/// 17 significant digits, locale-free.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// One sample as a JSON line with the fixed field set.
pub fn write_sample_line(w: &mut impl Write, s: &TypicalCellSample) -> std::io::Result<()> {
    let boundary_key = if s.cell.dim() == 2 { "perimeter" } else { "surface_area" };
    let conditioned = match s.conditioned_a {
        Some(a) => fmt_f64(a),
        None => "null".to_string(),
    };
    writeln!(
        w,
        concat!(
            "{{\"origin\":\"{}\",\"seed\":{},\"stream\":{},\"slot\":{},\"fcount\":{},",
            "\"inball_r\":{},\"functionals\":{{\"phi_content\":{},\"inradius\":{},",
            "\"circumradius\":{},\"diameter\":{},\"volume\":{},\"{}\":{}}},",
            "\"summary\":{{\"fcount\":{},\"phi\":{},\"circ_over_in\":{},\"iso_ratio\":{},",
            "\"diam_norm\":{}}},\"conditioned_a\":{},\"dropped\":false}}"
        ),
        s.origin.name(),
        s.seed,
        s.stream,
        s.slot,
        s.fcount,
        fmt_f64(s.inball_r),
        fmt_f64(s.functionals.phi_content),
        fmt_f64(s.functionals.inradius),
        fmt_f64(s.functionals.circumradius),
        fmt_f64(s.functionals.diameter),
        fmt_f64(s.functionals.volume),
        boundary_key,
        fmt_f64(s.functionals.boundary),
        s.summary.fcount,
        fmt_f64(s.summary.phi),
        fmt_f64(s.summary.circ_over_in),
        fmt_f64(s.summary.iso_ratio),
        fmt_f64(s.summary.diam_norm),
        conditioned,
    )
}

/// One row of `estimates.csv`.
#[derive(Debug, Clone)]
pub struct EstimateRow {
    pub experiment_id: String,
    pub theorem_tag: String,
    pub sigma: String,
    pub a: f64,
    pub n: u32,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl EstimateRow {
    pub fn from_estimate(
        experiment_id: &str,
        theorem_tag: &str,
        est: &ConditionalEstimate,
        seed: u64,
    ) -> Self {
        EstimateRow {
            experiment_id: experiment_id.to_string(),
            theorem_tag: theorem_tag.to_string(),
            sigma: est.sigma_name.clone(),
            a: est.a,
            n: est.n,
            p_hat: est.p_hat,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            n_samples: est.denominator_count,
            seed,
        }
    }
}

pub const ESTIMATES_HEADER: &str =
    "experiment_id,theorem_tag,sigma,a,n,p_hat,ci_low,ci_high,n_samples,seed";

pub fn write_estimates_csv(w: &mut impl Write, rows: &[EstimateRow]) -> std::io::Result<()> {
    writeln!(w, "{ESTIMATES_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.experiment_id,
            r.theorem_tag,
            r.sigma,
            fmt_f64(r.a),
            r.n,
            fmt_f64(r.p_hat),
            fmt_f64(r.ci_low),
            fmt_f64(r.ci_high),
            r.n_samples,
            r.seed
        )?;
    }
    Ok(())
}

pub fn write_ratefit_json(w: &mut impl Write, run_id: &str, sigma: &str, fit: &RateFit) -> std::io::Result<()> {
    let grid: Vec<String> = fit
        .a_grid
        .iter()
        .zip(&fit.p_values)
        .map(|(a, p)| format!("{{\"a\":{},\"p_hat\":{}}}", fmt_f64(*a), fmt_f64(*p)))
        .collect();
    writeln!(
        w,
        "{{\"run_id\":\"{}\",\"sigma\":\"{}\",\"slope\":{},\"stderr\":{},\"intercept\":{},\"grid\":[{}]}}",
        run_id,
        sigma,
        fmt_f64(fit.slope),
        fmt_f64(fit.slope_stderr),
        fmt_f64(fit.intercept),
        grid.join(",")
    )
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, passed: bool, value: f64, threshold: f64, detail: String) -> Self {
        Self { name: name.to_string(), passed, value, threshold, detail }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub run_id: String,
    pub config_hash: String,
    pub code_version: String,
    pub experiment: String,
    pub seed: u64,
    pub workers: usize,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub samples_emitted: u64,
    pub slots_processed: u64,
    pub dropped_degenerate: u64,
    pub marginal_spanning: u64,
    pub tuple_proposals: u64,
    pub tuple_accepted: u64,
    pub checks: Vec<CheckResult>,
    pub files: Vec<(String, String)>,
}

impl RunManifest {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write_json(&self, w: &mut impl Write) -> std::io::Result<()> {
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{{\"name\":\"{}\",\"passed\":{},\"value\":{},\"threshold\":{},\"detail\":\"{}\"}}",
                    c.name,
                    c.passed,
                    fmt_f64(c.value),
                    fmt_f64(c.threshold),
                    c.detail.replace('"', "'")
                )
            })
            .collect();
        let files: Vec<String> = self
            .files
            .iter()
            .map(|(name, hash)| format!("{{\"name\":\"{name}\",\"sha256\":\"{hash}\"}}"))
            .collect();
        writeln!(
            w,
            concat!(
                "{{\"run_id\":\"{}\",\"config_hash\":\"{}\",\"code_version\":\"{}\",",
                "\"experiment\":\"{}\",\"seed\":{},\"workers\":{},",
                "\"started_unix\":{},\"finished_unix\":{},",
                "\"samples_emitted\":{},\"slots_processed\":{},",
                "\"dropped_degenerate\":{},\"marginal_spanning\":{},",
                "\"tuple_proposals\":{},\"tuple_accepted\":{},",
                "\"checks\":[{}],\"files\":[{}]}}"
            ),
            self.run_id,
            self.config_hash,
            self.code_version,
            self.experiment,
            self.seed,
            self.workers,
            self.started_unix,
            self.finished_unix,
            self.samples_emitted,
            self.slots_processed,
            self.dropped_degenerate,
            self.marginal_spanning,
            self.tuple_proposals,
            self.tuple_accepted,
            checks.join(","),
            files.join(",")
        )
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

/// Collects sample JSON lines in memory so grid experiments can stream rows
/// and drop cell geometry batch by batch.
#[derive(Default)]
pub struct SampleSink {
    buf: Vec<u8>,
    count: u64,
}

impl SampleSink {
    pub fn write(&mut self, s: &TypicalCellSample) -> std::io::Result<()> {
        self.count += 1;
        write_sample_line(&mut self.buf, s)
    }

    pub fn write_all(&mut self, samples: &[TypicalCellSample]) -> std::io::Result<()> {
        for s in samples {
            self.write(s)?;
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}
