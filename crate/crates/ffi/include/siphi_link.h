#ifndef SIPHI_LINK_H
#define SIPHI_LINK_H

/* Generated by cbindgen from the siphi-link-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum {
  SIPHI_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SIPHI_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was out of range or a record failed validation.
   */
  SIPHI_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A JSON document failed to parse.
   */
  SIPHI_STATUS_INVALID_JSON = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  SIPHI_STATUS_INVALID_UTF8 = 4,
} SiphiStatus;

/**
 * Opaque fabrication-platform record.
 */
typedef struct SiphiPlatform SiphiPlatform;

/**
 * Opaque link variant: a platform with a pathway set applied.
 */
typedef struct SiphiVariant SiphiVariant;

/**
 * Model and search settings shared by all evaluation calls.
 */
typedef struct {
  /**
   * How many times the lumped coupling loss is incurred per link (>= 1).
   */
  uint32_t coupler_count;
  /**
   * Minimum channel spacing in filter linewidths (> 0).
   */
  double min_spacing_linewidths;
  /**
   * Nonzero to search bitrates in 0.5 Gb/s steps instead of the line rate.
   */
  bool br_sweep;
  /**
   * Laser wall-plug efficiency in (0, 1].
   */
  double laser_wallplug_efficiency;
  /**
   * Thermal tuning power per ring, mW.
   */
  double tuning_power_per_mrr;
  /**
   * Modulator driver energy, pJ/bit.
   */
  double driver_energy;
  /**
   * Receiver energy, pJ/bit.
   */
  double receiver_energy;
} SiphiSettings;

/**
 * Flattened budget evaluation of one (N, BR) duplet.
 */
typedef struct {
  double opb_per_wavelength_db;
  /**
   * Positive infinity when the per-waveguide cap is unbounded.
   */
  double opb_per_waveguide_db;
  double coupling_db;
  double propagation_db;
  double modulator_il_db;
  double filter_il_db;
  double loss_total_db;
  double modulator_array_db;
  double filter_array_db;
  double penalty_total_db;
  double p_loss_total_db;
  /**
   * Negative infinity when the per-wavelength check fails outright.
   */
  double opb_margin_db;
  bool per_wavelength_ok;
  bool per_waveguide_ok;
} SiphiBudget;

/**
 * The optimizer's chosen duplet.
 */
typedef struct {
  uint32_t n_lambda;
  double br_gbps;
  double aggregate_bw_gbps;
  double error_db;
  bool feasible;
  /**
   * NaN when the cell is infeasible.
   */
  double epb_pj;
} SiphiOptimum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *siphi_version(void);

/**
 * Default settings: single coupler pass, 1.3-linewidth spacing floor, fixed
 * line rate, and the default energy coefficients.
 */
SiphiSettings siphi_settings_default(void);

/**
 * Number of built-in fabrication platforms.
 */
uintptr_t siphi_builtin_platform_count(void);

/**
 * New handle to a built-in platform by index, or null when out of range.
 */
SiphiPlatform *siphi_platform_builtin(uintptr_t index);

/**
 * Parse one platform record from JSON (same schema as the platforms file).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
SiphiStatus siphi_platform_from_json(const char *json, SiphiPlatform **out);

/**
 * Serialize a platform record to JSON; free with [`siphi_string_free`].
 *
 * # Safety
 * `platform` must be a live handle from this library.
 */
char *siphi_platform_to_json(const SiphiPlatform *platform);

/**
 * # Safety
 * `platform` must come from this library and not be used afterwards.
 */
void siphi_platform_free(SiphiPlatform *platform);

/**
 * Apply a pathway set to a platform, producing a link variant handle.
 *
 * # Safety
 * `platform` must be a live handle from this library.
 */
SiphiVariant *siphi_variant_new(const SiphiPlatform *platform,
                                bool minimized_loss,
                                bool wide_fsr,
                                bool increased_maop);

/**
 * # Safety
 * `variant` must come from this library and not be used afterwards.
 */
void siphi_variant_free(SiphiVariant *variant);

/**
 * Evaluate the power budget of one (N, BR) duplet at one length.
 *
 * # Safety
 * `variant`, `settings`, and `out` must be valid pointers.
 */
SiphiStatus siphi_evaluate_budget(const SiphiVariant *variant,
                                  const SiphiSettings *settings,
                                  double length_cm,
                                  uint32_t n_lambda,
                                  double br_gbps,
                                  SiphiBudget *out);

/**
 * Find the optimal duplet for a variant at one length.
 *
 * # Safety
 * `variant`, `settings`, and `out` must be valid pointers.
 */
SiphiStatus siphi_optimize(const SiphiVariant *variant,
                           const SiphiSettings *settings,
                           double length_cm,
                           SiphiOptimum *out);

/**
 * Sweep a variant from 1 cm to `l_max_cm` and return the series as a JSON
 * document; free with [`siphi_string_free`].
 *
 * # Safety
 * `variant`, `settings`, and `out` must be valid pointers.
 */
SiphiStatus siphi_sweep_json(const SiphiVariant *variant,
                             const SiphiSettings *settings,
                             double l_max_cm,
                             double step_cm,
                             char **out);

/**
 * Build the viability grid and return it as CSV; platforms come from
 * `platforms_json` (a JSON array of platform records) or the built-ins when
 * null. Free the result with [`siphi_string_free`].
 *
 * # Safety
 * `settings` and `out` must be valid pointers; `platforms_json` may be null.
 */
SiphiStatus siphi_grid_csv(const SiphiSettings *settings,
                           const char *platforms_json,
                           double l_max_cm,
                           double report_length_cm,
                           char **out);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void siphi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIPHI_LINK_H */
