#ifndef NTNSPLIT_H
#define NTNSPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NtnStatus {
  NTN_STATUS_OK = 0,
  NTN_STATUS_NULL_POINTER = 1,
  NTN_STATUS_INVALID_ARGUMENT = 2,
  NTN_STATUS_DOMAIN = 3,
  NTN_STATUS_UNKNOWN_SPLIT = 4,
  NTN_STATUS_USE_CASE_UNDEFINED = 5,
  NTN_STATUS_MISSING_CELL = 6,
  NTN_STATUS_INTERNAL = 99,
} NtnStatus;

typedef enum NtnScenario {
  NTN_SCENARIO_A = 0,
  NTN_SCENARIO_B1 = 1,
  NTN_SCENARIO_B2 = 2,
  NTN_SCENARIO_C = 3,
} NtnScenario;

typedef enum NtnSplit {
  NTN_SPLIT_LLS = 0,
  NTN_SPLIT_CU_DU = 1,
  NTN_SPLIT_GNB_ONBOARD = 2,
} NtnSplit;

typedef enum NtnLatencyClass {
  NTN_LATENCY_CLASS_NON_IDEAL = 0,
  NTN_LATENCY_CLASS_SUB_IDEAL = 1,
  NTN_LATENCY_CLASS_NEAR_IDEAL = 2,
  NTN_LATENCY_CLASS_IDEAL = 3,
} NtnLatencyClass;

typedef enum NtnProcedure {
  NTN_PROCEDURE_INTRA_DU = 0,
  NTN_PROCEDURE_INTER_DU = 1,
  NTN_PROCEDURE_INTER_GNB_INTRA_AMF = 2,
} NtnProcedure;

typedef enum NtnFormat {
  NTN_FORMAT_JSON = 0,
  NTN_FORMAT_CSV = 1,
  NTN_FORMAT_PLOT_CSV = 2,
} NtnFormat;

/**
 * Opaque analyzer handle.
 */
typedef struct NtnAnalyzer NtnAnalyzer;

typedef struct NtnLinkDelays {
  double sl_ms;
  double fl_ms;
  double isl_ms;
  double igsl_ms;
  double sl_km;
  double fl_km;
  double isl_km;
  double igsl_km;
} NtnLinkDelays;

typedef struct NtnFeasibility {
  uint8_t split_id;
  /**
   * NtnLatencyClass actually applied.
   */
  uint32_t use_case;
  double separation_km;
  double budget_km;
  double margin_km;
  bool feasible;
  double bw_dl_mbps;
  double bw_ul_mbps;
} NtnFeasibility;

typedef struct NtnPhaseDurations {
  double setup_ms;
  double buffer_ms;
  double execution_ms;
  double total_ms;
} NtnPhaseDurations;

typedef struct NtnLinkCounts {
  uint32_t sl;
  uint32_t fl;
  uint32_t isl;
  uint32_t igsl;
} NtnLinkCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocates an analyzer with the reference configuration
 * (600 km, SL 30 deg, FL 10 deg, 20 satellites per plane).
 */
struct NtnAnalyzer *ntn_analyzer_new(void);

/**
 * # Safety
 * `handle` must be NULL or a pointer from `ntn_analyzer_new` not yet freed.
 */
void ntn_analyzer_free(struct NtnAnalyzer *handle);

/**
 * # Safety
 * `handle` must be a live analyzer.
 */
enum NtnStatus ntn_analyzer_set_geometry(struct NtnAnalyzer *handle,
                                         double altitude_km,
                                         double sl_elevation_deg,
                                         double fl_elevation_deg,
                                         uint32_t sats_per_plane);

/**
 * # Safety
 * `handle` must be a live analyzer.
 */
enum NtnStatus ntn_analyzer_set_timing(struct NtnAnalyzer *handle,
                                       double per_message_processing_ms,
                                       double ssb_acquisition_ms,
                                       double cn_api_total_ms,
                                       double trigger_offset_ms,
                                       bool processing_at_relays);

/**
 * Switch between geometry-derived delays and the published rounded set.
 *
 * # Safety
 * `handle` must be a live analyzer.
 */
enum NtnStatus ntn_analyzer_use_reference_delays(struct NtnAnalyzer *handle, bool enabled);

/**
 * # Safety
 * `handle` must be a live analyzer; `out` must be valid for writes.
 */
enum NtnStatus ntn_analyzer_link_delays(const struct NtnAnalyzer *handle,
                                        struct NtnLinkDelays *out);

/**
 * Slant range for the default Earth radius.
 *
 * # Safety
 * `out_km` must be valid for writes.
 */
enum NtnStatus ntn_slant_range_km(double altitude_km, double elevation_deg, double *out_km);

/**
 * Judge one split at `use_case` (an `NtnLatencyClass`) over a fronthaul
 * path of `total_path_km`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NtnStatus ntn_check_feasibility(uint8_t split_id,
                                     uint32_t use_case,
                                     double total_path_km,
                                     uint32_t antennas,
                                     uint32_t beams,
                                     bool relax,
                                     struct NtnFeasibility *out);

/**
 * Evaluate one scenario/split cell. Any of the out pointers may be NULL.
 *
 * # Safety
 * `handle` must be a live analyzer; non-NULL out pointers must be valid for writes.
 */
enum NtnStatus ntn_analyzer_evaluate_cell(const struct NtnAnalyzer *handle,
                                          uint32_t scenario,
                                          uint32_t split,
                                          struct NtnPhaseDurations *out_phases,
                                          struct NtnLinkCounts *out_counts,
                                          uint32_t *out_procedure);

/**
 * Run the full 12-cell grid and serialize it (`format` is an `NtnFormat`).
 * The returned string must be released with `ntn_string_free`.
 *
 * # Safety
 * `handle` must be a live analyzer; `out` must be valid for writes.
 */
enum NtnStatus ntn_analyzer_grid(const struct NtnAnalyzer *handle, uint32_t format, char **out);

/**
 * Count the ordering checks passed on the full grid.
 *
 * # Safety
 * `handle` must be a live analyzer; non-NULL out pointers must be valid for writes.
 */
enum NtnStatus ntn_analyzer_check_trends(const struct NtnAnalyzer *handle,
                                         uint32_t *out_passed,
                                         uint32_t *out_total);

/**
 * The function-split catalog as JSON. Free with `ntn_string_free`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NtnStatus ntn_catalog_json(char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void ntn_string_free(char *s);

/**
 * Last error message on this thread, or NULL. Valid until the next failing
 * call on the same thread.
 */
const char *ntn_last_error(void);

const char *ntn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NTNSPLIT_H */
