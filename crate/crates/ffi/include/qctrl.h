#ifndef QCTRL_H
#define QCTRL_H

/* Generated by cbindgen from the qctrl-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every FFI entry point.
 */
typedef enum QctrlStatus {
  /**
   * Success.
   */
  QCTRL_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  QCTRL_STATUS_NULL_ARG = 1,
  /**
   * The level/dipole arrays do not describe a valid system.
   */
  QCTRL_STATUS_INVALID_SPEC = 2,
  /**
   * A tolerance was not positive and finite.
   */
  QCTRL_STATUS_INVALID_TOLERANCE = 3,
  /**
   * Internal error (panic caught at the boundary).
   */
  QCTRL_STATUS_INTERNAL = 4,
} QctrlStatus;

/**
 * Controllability verdict.
 */
typedef enum QctrlVerdict {
  /**
   * The dynamical Lie algebra is all of u(N).
   */
  QCTRL_VERDICT_COMPLETELY_CONTROLLABLE = 0,
  /**
   * The algebra is su(N); controllable up to a global phase.
   */
  QCTRL_VERDICT_CONTROLLABLE_UP_TO_PHASE = 1,
  QCTRL_VERDICT_NOT_CONTROLLABLE = 2,
  /**
   * No rule fired; run the closure oracle for a definite answer.
   */
  QCTRL_VERDICT_UNDETERMINED = 3,
} QctrlVerdict;

/**
 * Opaque handle to an N-level system description.
 */
typedef struct QctrlSystem QctrlSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a system from `num_levels` energies and `num_levels - 1` adjacent
 * transition dipoles. On success `*out` owns the new handle.
 *
 * # Safety
 * `levels` must point to `num_levels` doubles, `dipoles` to
 * `num_levels - 1` doubles, and `out` must be a valid pointer.
 */
enum QctrlStatus qctrl_system_new(const double *levels,
                                  uintptr_t num_levels,
                                  const double *dipoles,
                                  struct QctrlSystem **out);

/**
 * Release a handle created by `qctrl_system_new`. NULL is a no-op.
 *
 * # Safety
 * `system` must be NULL or a pointer previously returned by
 * `qctrl_system_new` that has not been freed.
 */
void qctrl_system_free(struct QctrlSystem *system);

/**
 * Run the rule engine and store the verdict in `*out_verdict`.
 *
 * # Safety
 * `system` and `out_verdict` must be valid pointers.
 */
enum QctrlStatus qctrl_verdict(const struct QctrlSystem *system,
                               double eps_param,
                               enum QctrlVerdict *out_verdict);

/**
 * Compute the dimension of the dynamical Lie algebra generated by `iH0`
 * and `iH1`, storing it in `*out_dimension`.
 *
 * # Safety
 * `system` and `out_dimension` must be valid pointers.
 */
enum QctrlStatus qctrl_closure_dimension(const struct QctrlSystem *system,
                                         double eps_rank,
                                         uintptr_t *out_dimension);

/**
 * Produce the full JSON report (rule verdict, and the closure oracle when
 * `with_oracle` is nonzero). `*out_json` receives a NUL-terminated string
 * owned by the library; free it with `qctrl_string_free`.
 *
 * # Safety
 * `system` and `out_json` must be valid pointers.
 */
enum QctrlStatus qctrl_report_json(const struct QctrlSystem *system,
                                   double eps_param,
                                   double eps_rank,
                                   int32_t with_oracle,
                                   char **out_json);

/**
 * Release a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a pointer previously returned in an out-string
 * parameter that has not been freed.
 */
void qctrl_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QCTRL_H */
