#ifndef NEMATIC_H
#define NEMATIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every exported function.
 */
typedef enum NematicStatus {
  NEMATIC_STATUS_OK = 0,
  NEMATIC_STATUS_NULL_POINTER = 1,
  NEMATIC_STATUS_INVALID_UTF8 = 2,
  NEMATIC_STATUS_CONFIG = 3,
  NEMATIC_STATUS_VALIDATION = 4,
  NEMATIC_STATUS_CFL = 5,
  NEMATIC_STATUS_INVALID_INPUT = 6,
  NEMATIC_STATUS_CONSISTENCY = 7,
  NEMATIC_STATUS_SOLVER_ABORT = 8,
  NEMATIC_STATUS_BUFFER_TOO_SMALL = 9,
  NEMATIC_STATUS_IO = 10,
  NEMATIC_STATUS_PANIC = 11,
  NEMATIC_STATUS_OTHER = 12,
} NematicStatus;

/**
 * Opaque Beris-Edwards solver with its current state.
 */
typedef struct NematicBe NematicBe;

/**
 * Opaque Ericksen-Leslie solver with its current state.
 */
typedef struct NematicEl NematicEl;

/**
 * Derived Ericksen-Leslie coefficients of a parameter set.
 */
typedef struct NematicCoefficients {
  double s;
  double k1;
  double k2;
  double k3;
  double k4;
  double alpha1;
  double alpha2;
  double alpha3;
  double alpha4;
  double alpha5;
  double alpha6;
  double gamma1;
  double gamma2;
  double beta1;
  double beta2;
  double beta3;
  double l0;
  double c0;
  /**
   * 1 if every coefficient identity and dissipation inequality holds.
   */
  int32_t checks_pass;
} NematicCoefficients;

typedef struct NematicBeEnergy {
  double kinetic;
  double bulk;
  double elastic;
  double total;
} NematicBeEnergy;

typedef struct NematicElEnergy {
  double kinetic;
  double frank;
  double total;
} NematicElEnergy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *nematic_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *nematic_version(void);

/**
 * Free a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void nematic_string_free(char *s);

/**
 * Compute the coefficient bridge for the material in `config_json`.
 *
 * # Safety
 * `config_json` must be a nul-terminated string and `out` writable.
 */
enum NematicStatus nematic_coefficients(const char *config_json, struct NematicCoefficients *out);

/**
 * Create a Beris-Edwards solver with well-prepared initial data.
 *
 * # Safety
 * `config_json` must be a nul-terminated string and `out` writable.
 */
enum NematicStatus nematic_be_new(const char *config_json, struct NematicBe **out);

/**
 * # Safety
 * `h` must come from [`nematic_be_new`] and not have been freed. Null is ignored.
 */
void nematic_be_free(struct NematicBe *h);

/**
 * Advance by `steps` time steps. On failure the state is left at the last
 * completed step.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum NematicStatus nematic_be_step(struct NematicBe *h, uint64_t steps);

/**
 * Current time, completed step count and number of grid nodes.
 *
 * # Safety
 * `h` must be a live handle; each output pointer may be null.
 */
enum NematicStatus nematic_be_info(struct NematicBe *h, double *t, uint64_t *step, size_t *nodes);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum NematicStatus nematic_be_energy(struct NematicBe *h, struct NematicBeEnergy *out);

/**
 * Copy Q as 5 doubles per node `(xx, xy, xz, yy, yz)`, node-major.
 *
 * # Safety
 * `h` must be a live handle and `buf` hold `len` doubles.
 */
enum NematicStatus nematic_be_copy_q(struct NematicBe *h, double *buf, size_t len);

/**
 * Copy the velocity as 3 doubles per node, node-major.
 *
 * # Safety
 * `h` must be a live handle and `buf` hold `len` doubles.
 */
enum NematicStatus nematic_be_copy_velocity(struct NematicBe *h, double *buf, size_t len);

/**
 * Serialize the current state as a JSON snapshot. Free the result with
 * [`nematic_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum NematicStatus nematic_be_snapshot(struct NematicBe *h, char **out);

/**
 * Create an Ericksen-Leslie solver from the configured initial director.
 *
 * # Safety
 * `config_json` must be a nul-terminated string and `out` writable.
 */
enum NematicStatus nematic_el_new(const char *config_json, struct NematicEl **out);

/**
 * # Safety
 * `h` must come from [`nematic_el_new`] and not have been freed. Null is ignored.
 */
void nematic_el_free(struct NematicEl *h);

/**
 * Advance by `steps` time steps. On failure the state is left at the last
 * completed step.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum NematicStatus nematic_el_step(struct NematicEl *h, uint64_t steps);

/**
 * Current time, completed step count and number of grid nodes.
 *
 * # Safety
 * `h` must be a live handle; each output pointer may be null.
 */
enum NematicStatus nematic_el_info(struct NematicEl *h, double *t, uint64_t *step, size_t *nodes);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum NematicStatus nematic_el_energy(struct NematicEl *h, struct NematicElEnergy *out);

/**
 * Copy the director as 3 doubles per node, node-major.
 *
 * # Safety
 * `h` must be a live handle and `buf` hold `len` doubles.
 */
enum NematicStatus nematic_el_copy_director(struct NematicEl *h, double *buf, size_t len);

/**
 * Copy the velocity as 3 doubles per node, node-major.
 *
 * # Safety
 * `h` must be a live handle and `buf` hold `len` doubles.
 */
enum NematicStatus nematic_el_copy_velocity(struct NematicEl *h, double *buf, size_t len);

/**
 * Serialize the current state as a JSON snapshot. Free the result with
 * [`nematic_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum NematicStatus nematic_el_snapshot(struct NematicEl *h, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEMATIC_H */
