//! C ABI for the inball typical-cell sampler: opaque handles, plain structs
//! and integer status codes so that other languages can bind without touching
//! Rust types. The generated header lands in `include/hypercell.h`.
//!
//! Configs are JSON strings of the form
//! `{"dim":2,"gamma":1.0,"seed":1,"dist":{"type":"isotropic"},"a_cap":null}`
//! with the same distribution schema as the CLI config files.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::Deserialize;

use hypercell::cli::DistSpec;
use hypercell::directions::ProcessParams;
use hypercell::samplers::{
    sample_typical_cell_inball, RandomStream, SampleError, TupleStats, SLOTS_PER_STREAM,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    SampleError = 4,
    Panic = 5,
}

/// One sampled typical cell, flattened for the C side. `boundary_measure` is
/// the perimeter in dimension 2 and the surface area in dimension 3.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct HcSample {
    pub fcount: u64,
    pub inball_r: f64,
    pub phi_content: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub diameter: f64,
    pub volume: f64,
    pub boundary_measure: f64,
    pub circ_over_in: f64,
    pub iso_ratio: f64,
    pub diam_norm: f64,
    pub stream: u64,
    pub slot: u64,
    /// Degenerate slots dropped (and counted) since the previous sample.
    pub dropped_before: u64,
}

#[derive(Deserialize)]
struct FfiConfig {
    dim: usize,
    gamma: f64,
    seed: u64,
    dist: DistSpec,
    #[serde(default)]
    a_cap: Option<f64>,
}

/// Opaque sampler handle.
pub struct HcSampler {
    params: ProcessParams,
    seed: u64,
    a_cap: Option<f64>,
    next_slot: u64,
    stats: TupleStats,
    dropped_total: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

/// ABI version of this header/library pair.
#[no_mangle]
pub extern "C" fn hc_abi_version() -> u32 {
    1
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn parse_config(config_json: *const c_char) -> Result<FfiConfig, HcStatus> {
    if config_json.is_null() {
        set_error("config_json is null");
        return Err(HcStatus::NullArgument);
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config_json is not valid UTF-8");
            return Err(HcStatus::InvalidUtf8);
        }
    };
    match serde_json::from_str::<FfiConfig>(text) {
        Ok(c) => Ok(c),
        Err(e) => {
            set_error(&format!("config parse error: {e}"));
            Err(HcStatus::ConfigError)
        }
    }
}

/// Creates a sampler from a JSON config. On success `*out` owns the handle;
/// release it with [`hc_sampler_free`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_sampler_new(
    config_json: *const c_char,
    out: *mut *mut HcSampler,
) -> HcStatus {
    if out.is_null() {
        set_error("out is null");
        return HcStatus::NullArgument;
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let dist = match cfg.dist.build() {
            Ok(d) => d,
            Err(e) => {
                set_error(&format!("{e}"));
                return HcStatus::ConfigError;
            }
        };
        if !dist.is_absolutely_continuous() {
            set_error("the inball sampler needs an absolutely continuous directional distribution");
            return HcStatus::ConfigError;
        }
        let params = match ProcessParams::new(cfg.gamma, cfg.dim, dist) {
            Ok(p) => p,
            Err(e) => {
                set_error(&format!("{e}"));
                return HcStatus::ConfigError;
            }
        };
        if cfg.dim != 2 && cfg.dim != 3 {
            set_error("cell sampling supports dimensions 2 and 3");
            return HcStatus::ConfigError;
        }
        let handle = Box::new(HcSampler {
            params,
            seed: cfg.seed,
            a_cap: cfg.a_cap,
            next_slot: 0,
            stats: TupleStats::default(),
            dropped_total: 0,
        });
        *out = Box::into_raw(handle);
        HcStatus::Ok
    }));
    result.unwrap_or_else(|_| {
        set_error("panic inside hc_sampler_new");
        HcStatus::Panic
    })
}

/// Draws the next typical cell into `*out`. Degenerate slots are skipped and
/// counted in `dropped_before`.
///
/// # Safety
/// `sampler` must come from [`hc_sampler_new`] and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hc_sampler_next(sampler: *mut HcSampler, out: *mut HcSample) -> HcStatus {
    if sampler.is_null() || out.is_null() {
        set_error("null argument");
        return HcStatus::NullArgument;
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let s = &mut *sampler;
        let mut dropped_before = 0u64;
        loop {
            let global = s.next_slot;
            s.next_slot += 1;
            let stream = global / SLOTS_PER_STREAM;
            let slot = global % SLOTS_PER_STREAM;
            let mut rng = RandomStream::slot(s.seed, stream, slot).rng();
            match sample_typical_cell_inball(
                &s.params, s.a_cap, &mut s.stats, s.seed, stream, slot, &mut rng,
            ) {
                Ok(sample) => {
                    *out = HcSample {
                        fcount: sample.fcount as u64,
                        inball_r: sample.inball_r,
                        phi_content: sample.functionals.phi_content,
                        inradius: sample.functionals.inradius,
                        circumradius: sample.functionals.circumradius,
                        diameter: sample.functionals.diameter,
                        volume: sample.functionals.volume,
                        boundary_measure: sample.functionals.boundary,
                        circ_over_in: sample.summary.circ_over_in,
                        iso_ratio: sample.summary.iso_ratio,
                        diam_norm: sample.summary.diam_norm,
                        stream,
                        slot,
                        dropped_before,
                    };
                    return HcStatus::Ok;
                }
                Err(e) if e.is_droppable() => {
                    dropped_before += 1;
                    s.dropped_total += 1;
                    if dropped_before > 10_000 {
                        set_error("too many consecutive degenerate slots");
                        return HcStatus::SampleError;
                    }
                }
                Err(e @ SampleError::RejectionStall)
                | Err(e @ SampleError::UnsupportedDistribution(_)) => {
                    set_error(&format!("{e}"));
                    return HcStatus::SampleError;
                }
                Err(e) => {
                    set_error(&format!("{e}"));
                    return HcStatus::SampleError;
                }
            }
        }
    }));
    result.unwrap_or_else(|_| {
        set_error("panic inside hc_sampler_next");
        HcStatus::Panic
    })
}

/// Total degenerate slots dropped over the sampler's lifetime.
///
/// # Safety
/// `sampler` must come from [`hc_sampler_new`].
#[no_mangle]
pub unsafe extern "C" fn hc_sampler_dropped(sampler: *const HcSampler) -> u64 {
    if sampler.is_null() {
        return 0;
    }
    (*sampler).dropped_total
}

/// Releases a sampler handle. Passing null is a no-op.
///
/// # Safety
/// `sampler` must come from [`hc_sampler_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hc_sampler_free(sampler: *mut HcSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Writes structural diagnostics for the distribution (one line per finding)
/// into the caller's buffer, NUL-terminated and truncated to `buf_len`.
/// `*written` receives the full (untruncated) length without the NUL.
///
/// # Safety
/// `config_json` must be NUL-terminated; `buf` must hold `buf_len` writable
/// bytes; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn hc_validate_config(
    config_json: *const c_char,
    buf: *mut c_char,
    buf_len: usize,
    written: *mut usize,
) -> HcStatus {
    let result = catch_unwind(AssertUnwindSafe(|| {
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let dist = match cfg.dist.build() {
            Ok(d) => d,
            Err(e) => {
                set_error(&format!("{e}"));
                return HcStatus::ConfigError;
            }
        };
        let mut lines = Vec::new();
        match dist.validate_support(cfg.dim) {
            Ok(()) => lines.push("support: ok".to_string()),
            Err(e) => lines.push(format!("support: {e}")),
        }
        match dist.n_min(cfg.dim) {
            Ok(n) => lines.push(format!("n_min = {n}")),
            Err(e) => lines.push(format!("n_min: {e}")),
        }
        lines.push(format!("delta_max = {:.12}", dist.delta_max(cfg.dim)));
        match dist.supp_condition_atoms(cfg.dim) {
            Ok(c) => lines.push(format!("supp_condition_atoms = {c}")),
            Err(e) => lines.push(format!("supp_condition_atoms: {e}")),
        }
        let text = lines.join("\n");
        if !written.is_null() {
            *written = text.len();
        }
        if !buf.is_null() && buf_len > 0 {
            let n = text.len().min(buf_len - 1);
            std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        HcStatus::Ok
    }));
    result.unwrap_or_else(|_| {
        set_error("panic inside hc_validate_config");
        HcStatus::Panic
    })
}
