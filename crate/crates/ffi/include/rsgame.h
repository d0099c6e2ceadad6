#ifndef RSGAME_H
#define RSGAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RsgStatus {
  RSG_STATUS_OK = 0,
  RSG_STATUS_NULL_POINTER = 1,
  RSG_STATUS_INVALID_UTF8 = 2,
  RSG_STATUS_INVALID_MODEL = 3,
  RSG_STATUS_INVALID_ARGUMENT = 4,
  RSG_STATUS_NOT_CONVERGED = 5,
  RSG_STATUS_ASSUMPTION_FAILED = 6,
  RSG_STATUS_REDUCIBLE = 7,
  RSG_STATUS_BUFFER_TOO_SMALL = 8,
  RSG_STATUS_INTERNAL = 9,
} RsgStatus;

/**
 * Result of an ergodic Nash solve.
 */
typedef struct RsgErgodic RsgErgodic;

/**
 * A validated model together with its optional Lyapunov certificate.
 */
typedef struct RsgModel RsgModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rsg_version(void);

/**
 * Copies the calling thread's last error message into `buf` (always
 * NUL-terminated when `len > 0`) and returns the full message length
 * excluding the terminator; 0 when there is no error.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null.
 */
size_t rsg_last_error(char *buf, size_t len);

/**
 * Parses and validates a JSON model.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum RsgStatus rsg_model_from_json(const char *json, struct RsgModel **out);

/**
 * # Safety
 * `model` must come from [`rsg_model_from_json`] and not be freed twice.
 */
void rsg_model_free(struct RsgModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum RsgStatus rsg_model_n_states(const struct RsgModel *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum RsgStatus rsg_model_n_actions(const struct RsgModel *model, uint8_t player_no, size_t *out);

/**
 * Principal-eigenvalue evaluation of a stationary profile. `w1` and `w2`
 * hold row-major weights, `n_states x n_actions(k)`. Writes `rho` and, if
 * `psi` is non-null, the eigenvector normalised at `i0` (`n_states` values).
 *
 * # Safety
 * Pointers must be valid for the sizes above.
 */
enum RsgStatus rsg_perron_value(const struct RsgModel *model,
                                const double *w1,
                                const double *w2,
                                uint8_t player_no,
                                double theta,
                                size_t i0,
                                double *rho,
                                double *psi);

/**
 * Ergodic Nash solve. Uses the model's Lyapunov certificate when it has one
 * (its hypotheses are then enforced), else reference state 0.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum RsgStatus rsg_solve_ergodic(const struct RsgModel *model,
                                 double theta1,
                                 double theta2,
                                 struct RsgErgodic **out);

/**
 * # Safety
 * `sol` must come from [`rsg_solve_ergodic`] and not be freed twice.
 */
void rsg_ergodic_free(struct RsgErgodic *sol);

/**
 * Writes `rho[0..2]`, `gaps[0..2]` and the certification flag; any output
 * pointer may be null.
 *
 * # Safety
 * Non-null outputs must be writable for two doubles (one bool).
 */
enum RsgStatus rsg_ergodic_summary(const struct RsgErgodic *sol,
                                   double *rho,
                                   double *gaps,
                                   bool *certified);

/**
 * Copies player `k`'s eigenvector (`n_states` values).
 *
 * # Safety
 * `buf` must be writable for `len` doubles.
 */
enum RsgStatus rsg_ergodic_psi(const struct RsgErgodic *sol,
                               uint8_t player_no,
                               double *buf,
                               size_t len);

/**
 * Copies player `k`'s equilibrium strategy, row-major
 * `n_states x n_actions(k)`.
 *
 * # Safety
 * `buf` must be writable for `len` doubles.
 */
enum RsgStatus rsg_ergodic_strategy(const struct RsgErgodic *sol,
                                    uint8_t player_no,
                                    double *buf,
                                    size_t len);

/**
 * Discounted Nash solve; writes a JSON report (release with
 * [`rsg_string_free`]) and whether the result is certified.
 *
 * # Safety
 * `model` must be a live handle, `json_out` writable, `certified` writable
 * or null.
 */
enum RsgStatus rsg_solve_discounted_json(const struct RsgModel *model,
                                         double theta1,
                                         double theta2,
                                         double alpha,
                                         size_t intervals,
                                         bool strict_arat,
                                         char **json_out,
                                         bool *certified);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rsg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RSGAME_H */
