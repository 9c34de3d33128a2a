/* C ABI for the hypercell typical-cell sampler. */

#ifndef HYPERCELL_H
#define HYPERCELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_ARGUMENT = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  HC_STATUS_CONFIG_ERROR = 3,
  HC_STATUS_SAMPLE_ERROR = 4,
  HC_STATUS_PANIC = 5,
} HcStatus;

/**
 * Opaque sampler handle.
 */
typedef struct HcSampler HcSampler;

/**
 * One sampled typical cell, flattened for the C side. `boundary_measure` is
 * the perimeter in dimension 2 and the surface area in dimension 3.
 */
typedef struct HcSample {
  uint64_t fcount;
  double inball_r;
  double phi_content;
  double inradius;
  double circumradius;
  double diameter;
  double volume;
  double boundary_measure;
  double circ_over_in;
  double iso_ratio;
  double diam_norm;
  uint64_t stream;
  uint64_t slot;
  /**
   * Degenerate slots dropped (and counted) since the previous sample.
   */
  uint64_t dropped_before;
} HcSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * ABI version of this header/library pair.
 */
uint32_t hc_abi_version(void);

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Creates a sampler from a JSON config. On success `*out` owns the handle;
 * release it with [`hc_sampler_free`].
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_sampler_new(const char *config_json, struct HcSampler **out);

/**
 * Draws the next typical cell into `*out`. Degenerate slots are skipped and
 * counted in `dropped_before`.
 *
 * # Safety
 * `sampler` must come from [`hc_sampler_new`] and `out` must be valid.
 */
enum HcStatus hc_sampler_next(struct HcSampler *sampler, struct HcSample *out);

/**
 * Total degenerate slots dropped over the sampler's lifetime.
 *
 * # Safety
 * `sampler` must come from [`hc_sampler_new`].
 */
uint64_t hc_sampler_dropped(const struct HcSampler *sampler);

/**
 * Releases a sampler handle. Passing null is a no-op.
 *
 * # Safety
 * `sampler` must come from [`hc_sampler_new`] and not be freed twice.
 */
void hc_sampler_free(struct HcSampler *sampler);

/**
 * Writes structural diagnostics for the distribution (one line per finding)
 * into the caller's buffer, NUL-terminated and truncated to `buf_len`.
 * `*written` receives the full (untruncated) length without the NUL.
 *
 * # Safety
 * `config_json` must be NUL-terminated; `buf` must hold `buf_len` writable
 * bytes; `written` may be null.
 */
enum HcStatus hc_validate_config(const char *config_json,
                                 char *buf,
                                 uintptr_t buf_len,
                                 uintptr_t *written);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HYPERCELL_H */
