#ifndef HYPERORBIT_H
#define HYPERORBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HoBackend {
  HO_BACKEND_AUTO = 0,
  HO_BACKEND_EXACT = 1,
  HO_BACKEND_NUMERIC = 2,
} HoBackend;

typedef enum HoStatus {
  HO_STATUS_OK = 0,
  HO_STATUS_NULL_POINTER = 1,
  HO_STATUS_INVALID_UTF8 = 2,
  HO_STATUS_PARSE_ERROR = 3,
  HO_STATUS_SCHEMA_VIOLATION = 4,
  HO_STATUS_INVALID_INPUT = 5,
  HO_STATUS_PIPELINE_ERROR = 6,
  HO_STATUS_BUFFER_TOO_SMALL = 7,
  HO_STATUS_PANIC = 8,
} HoStatus;

typedef enum HoVerdict {
  HO_VERDICT_HYPERCYCLIC = 0,
  HO_VERDICT_NOT_HYPERCYCLIC = 1,
  HO_VERDICT_INCONCLUSIVE = 2,
} HoVerdict;

/**
 * Parsed group presentation.
 */
typedef struct HoPresentation HoPresentation;

/**
 * Outcome of [`ho_decide`].
 */
typedef struct HoReport HoReport;

typedef struct HoConfig {
  size_t prec;
  uint64_t max_relation_norm;
  bool include_first_block;
  enum HoBackend backend;
  uint64_t seed;
} HoConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *ho_last_error(void);

/**
 * Library version as a static string.
 */
const char *ho_version(void);

/**
 * Fills `out` with the defaults (192 bits, relation bound 10^6, auto backend).
 *
 * # Safety
 * `out` must be null or point to writable memory for an `HoConfig`.
 */
enum HoStatus ho_config_default(struct HoConfig *out);

/**
 * Parses a presentation from a NUL-terminated JSON string.
 *
 * # Safety
 * `json` must be null or a valid C string; `out` must be null or writable.
 */
enum HoStatus ho_presentation_from_json(const char *json, struct HoPresentation **out);

/**
 * The built-in two-dimensional example; `numeric != 0` gives the form without logs.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum HoStatus ho_presentation_example(int32_t numeric, struct HoPresentation **out);

/**
 * Dimension `n` and generator count `p`.
 *
 * # Safety
 * `g` must be null or a live handle; `n` and `p` must be null or writable.
 */
enum HoStatus ho_presentation_shape(const struct HoPresentation *g, size_t *n, size_t *p);

/**
 * # Safety
 * `g` must be null or a handle from this library, not freed before.
 */
void ho_presentation_free(struct HoPresentation *g);

/**
 * Runs the full decision. `config` may be null for the defaults.
 *
 * # Safety
 * `g` must be a live handle; `config` null or valid; `out` writable.
 */
enum HoStatus ho_decide(const struct HoPresentation *g,
                        const struct HoConfig *config,
                        struct HoReport **out);

/**
 * # Safety
 * `r` must be a live report; `out` writable.
 */
enum HoStatus ho_report_verdict(const struct HoReport *r, enum HoVerdict *out);

/**
 * The report as compact JSON, owned by the report.
 *
 * # Safety
 * `r` must be null or a live report.
 */
const char *ho_report_json(const struct HoReport *r);

/**
 * Writes the witness `w0` as `re_1, im_1, re_2, ...` into `buf`. `needed`
 * receives the required length (`2n`, or 0 when no witness was computed).
 *
 * # Safety
 * `r` must be a live report; `buf` must hold `len` doubles; `needed` writable.
 */
enum HoStatus ho_report_witness(const struct HoReport *r, double *buf, size_t len, size_t *needed);

/**
 * # Safety
 * `r` must be null or a report from this library, not freed before.
 */
void ho_report_free(struct HoReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERORBIT_H */
