/* C interface to the hesim double-slit simulator. Generated by cbindgen; do not edit. */

#ifndef HESIM_H
#define HESIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Half width of a reference bench slit, meters.
 */
#define HES_REFERENCE_SLIT_HALF_WIDTH_M 40e-6

/**
 * Center-to-center slit separation of the reference bench, meters.
 */
#define HES_REFERENCE_SLIT_SEPARATION_M 250e-6

/**
 * Reference bench wavelength, meters.
 */
#define HES_REFERENCE_WAVELENGTH_M 702e-9

/**
 * Slit-plane to detection-plane distance of the reference bench, meters.
 */
#define HES_REFERENCE_DISTANCE_M 0.42

/**
 * Result of every fallible call.
 */
typedef enum HesStatus {
  /**
   * The call succeeded and any out parameter holds a value.
   */
  HES_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HES_STATUS_NULL_POINTER = 1,
  /**
   * An argument was out of range, non-finite, or inconsistent.
   */
  HES_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The simulation itself failed; out parameters are untouched.
   */
  HES_STATUS_RUN_FAILED = 3,
} HesStatus;

/**
 * Which curve a simulated counting scan sweeps.
 */
typedef enum HesScanKind {
  /**
   * Coincidences against detector position at a fixed analyzer angle.
   */
  HES_SCAN_KIND_COINCIDENCE_SPATIAL = 0,
  /**
   * Coincidences against analyzer angle at a fixed detector position.
   */
  HES_SCAN_KIND_COINCIDENCE_POLARIZATION = 1,
  /**
   * Signal singles against detector position.
   */
  HES_SCAN_KIND_SINGLES_SPATIAL = 2,
  /**
   * Idler singles against analyzer angle.
   */
  HES_SCAN_KIND_SINGLES_POLARIZATION = 3,
} HesScanKind;

/**
 * Opaque simulator state: slit geometry plus the prepared two-photon
 * state. Create with `hes_model_new`, release with `hes_model_free`.
 */
typedef struct HesModel HesModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a model from the projection amplitudes that prepare the state
 * (`alpha² + beta² = 1`) and the bench geometry, all in SI units.
 *
 * On success writes a heap-allocated handle through `out_model`; the
 * caller owns it and must release it with `hes_model_free`.
 *
 * # Safety
 *
 * `out_model` must be null (reported as an error) or valid for writing
 * one pointer.
 */
enum HesStatus hes_model_new(double alpha,
                             double beta,
                             double projection_phase_rad,
                             double slit_half_width_m,
                             double slit_separation_m,
                             double wavelength_m,
                             double distance_m,
                             struct HesModel **out_model);

/**
 * Releases a model created by `hes_model_new`. Null is a no-op.
 *
 * # Safety
 *
 * `model` must be null or a handle from `hes_model_new` that has not
 * been freed already; the handle is invalid afterwards.
 */
void hes_model_free(struct HesModel *model);

/**
 * Coincidence density per meter of detector travel and radian of
 * analyzer angle, at analyzer angle `theta_rad` and position `x_m`.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_coincidence_density(const struct HesModel *model,
                                       double theta_rad,
                                       double x_m,
                                       double *out);

/**
 * Coincidence density with both singles marginals subtracted and the
 * envelope baseline restored; its fringe depth tracks entanglement.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_corrected_density(const struct HesModel *model,
                                     double theta_rad,
                                     double x_m,
                                     double *out);

/**
 * Signal-arm detection density per meter at position `x_m`, analyzer
 * ignored.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_spatial_singles(const struct HesModel *model, double x_m, double *out);

/**
 * Idler-arm detection density per radian at analyzer angle `theta_rad`,
 * position integrated out.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_polarization_singles(const struct HesModel *model,
                                        double theta_rad,
                                        double *out);

/**
 * Concurrence of the prepared state: 0 for a product state, 1 for a
 * maximally entangled one.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_concurrence(const struct HesModel *model, double *out);

/**
 * Fringe visibility shared by both singles patterns.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_singles_visibility(const struct HesModel *model, double *out);

/**
 * Corrected-fringe visibility at the fringe-aligned analyzer settings;
 * equals the squared concurrence.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_corrected_visibility_aligned(const struct HesModel *model, double *out);

/**
 * Largest corrected-fringe visibility over all analyzer settings.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_corrected_visibility_ceiling(const struct HesModel *model, double *out);

/**
 * Corrected-fringe visibility of a position scan at analyzer angle
 * `theta_rad`.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_corrected_spatial_visibility(const struct HesModel *model,
                                                double theta_rad,
                                                double *out);

/**
 * Corrected-fringe visibility of an analyzer scan at detector position
 * `x_m`.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out` must be null or valid
 * for writing one double.
 */
enum HesStatus hes_corrected_polarization_visibility(const struct HesModel *model,
                                                     double x_m,
                                                     double *out);

/**
 * Simulates one counting scan on a uniform grid and writes the Poisson
 * draws into `out_counts`.
 *
 * `kind` selects the swept curve (a `HesScanKind` value; anything else
 * is rejected). `fixed_setting` is the analyzer angle for a coincidence
 * position scan, the detector position for a coincidence analyzer scan,
 * and ignored for singles. The grid runs from `scan_min` to `scan_max`
 * inclusive with `points` entries; `expected_total` is the expected
 * event budget for the whole scan. Identical arguments and `seed`
 * reproduce identical counts.
 *
 * # Safety
 *
 * `model` must be null or a live handle; `out_counts` must be null or
 * valid for writing `points` unsigned 64-bit integers.
 */
enum HesStatus hes_simulate_counts(const struct HesModel *model,
                                   uint32_t kind,
                                   double fixed_setting,
                                   double scan_min,
                                   double scan_max,
                                   size_t points,
                                   double expected_total,
                                   uint64_t seed,
                                   uint64_t *out_counts);

/**
 * Static, NUL-terminated name for a status code; unknown codes map to
 * "unknown".
 */
const char *hes_status_name(uint32_t status);

/**
 * Static, NUL-terminated library version string.
 */
const char *hes_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HESIM_H */
