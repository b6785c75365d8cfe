#ifndef HMPID_H
#define HMPID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HmpidStatus {
  HMPID_STATUS_OK = 0,
  HMPID_STATUS_NULL_POINTER = 1,
  HMPID_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Probabilities or parameters failed validation.
   */
  HMPID_STATUS_VALIDATION = 3,
  /**
   * Malformed JSON or UTF-8.
   */
  HMPID_STATUS_FORMAT = 4,
  HMPID_STATUS_NUMERICAL = 5,
  /**
   * The verdict does not carry parameters.
   */
  HMPID_STATUS_WRONG_KIND = 6,
  HMPID_STATUS_PANIC = 7,
} HmpidStatus;

typedef enum HmpidVerdictKind {
  HMPID_VERDICT_KIND_HMP = 0,
  HMPID_VERDICT_KIND_NO_HMP = 1,
  HMPID_VERDICT_KIND_CANNOT_DECIDE = 2,
} HmpidVerdictKind;

typedef struct HmpidDistribution HmpidDistribution;

typedef struct HmpidParams HmpidParams;

typedef struct HmpidVerdict HmpidVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *hmpid_last_error(void);

/**
 * # Safety
 * `s` must come from this library and must not be freed twice.
 */
void hmpid_string_free(char *s);

/**
 * Parses a distribution from JSON of the form `{"n": .., "probabilities": {..}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HmpidStatus hmpid_distribution_from_json(const char *json, struct HmpidDistribution **out);

/**
 * Builds a distribution over strings of length `n` from `2^n` probabilities
 * in lexicographic order.
 *
 * # Safety
 * `probs` must point to `len` doubles and `out` must be writable.
 */
enum HmpidStatus hmpid_distribution_from_probs(size_t n,
                                               const double *probs,
                                               size_t len,
                                               struct HmpidDistribution **out);

/**
 * String length of the distribution, or 0 for a null handle.
 *
 * # Safety
 * `dist` must be null or a live handle.
 */
size_t hmpid_distribution_n(const struct HmpidDistribution *dist);

/**
 * Copies the `2^n` probabilities into `buf`.
 *
 * # Safety
 * `dist` must be a live handle and `buf` must hold `len` doubles.
 */
enum HmpidStatus hmpid_distribution_probs(const struct HmpidDistribution *dist,
                                          double *buf,
                                          size_t len);

/**
 * # Safety
 * `dist` must be null or a handle not yet freed.
 */
void hmpid_distribution_free(struct HmpidDistribution *dist);

/**
 * Builds parameters for `d` hidden states. `transition` is `d*d` and
 * `emission` is `d*2`, both row-major; `initial` has `d` entries.
 *
 * # Safety
 * The arrays must have the stated lengths and `out` must be writable.
 */
enum HmpidStatus hmpid_params_new(size_t d,
                                  const double *transition,
                                  const double *emission,
                                  const double *initial,
                                  struct HmpidParams **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HmpidStatus hmpid_params_from_json(const char *json, struct HmpidParams **out);

/**
 * Number of hidden states, or 0 for a null handle.
 *
 * # Safety
 * `params` must be null or a live handle.
 */
size_t hmpid_params_states(const struct HmpidParams *params);

/**
 * Copies parameters into row-major buffers sized as in [`hmpid_params_new`].
 * Any output pointer may be null to skip it.
 *
 * # Safety
 * `params` must be a live handle and each non-null buffer large enough.
 */
enum HmpidStatus hmpid_params_get(const struct HmpidParams *params,
                                  double *transition,
                                  double *emission,
                                  double *initial);

/**
 * # Safety
 * `params` must be a live handle and `out` writable. Free the result with
 * [`hmpid_string_free`].
 */
enum HmpidStatus hmpid_params_to_json(const struct HmpidParams *params, char **out);

/**
 * # Safety
 * `params` must be null or a handle not yet freed.
 */
void hmpid_params_free(struct HmpidParams *params);

/**
 * Exact distribution over strings of length `n` generated by `params`.
 *
 * # Safety
 * `params` must be a live handle and `out` writable.
 */
enum HmpidStatus hmpid_simulate(const struct HmpidParams *params,
                                size_t n,
                                struct HmpidDistribution **out);

/**
 * Runs identification with default tolerances. `max_states == 0` uses the
 * largest state count the string length supports.
 *
 * # Safety
 * `dist` must be a live handle and `out` writable.
 */
enum HmpidStatus hmpid_identify(const struct HmpidDistribution *dist,
                                size_t max_states,
                                bool paper_literal,
                                struct HmpidVerdict **out);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
enum HmpidVerdictKind hmpid_verdict_kind(const struct HmpidVerdict *verdict);

/**
 * State count of the verdict: recovered states, the largest count tested,
 * or the count at which the search stopped.
 *
 * # Safety
 * `verdict` must be null or a live handle.
 */
size_t hmpid_verdict_states(const struct HmpidVerdict *verdict);

/**
 * Copies the recovered parameters into a new handle.
 *
 * # Safety
 * `verdict` must be a live handle and `out` writable.
 */
enum HmpidStatus hmpid_verdict_params(const struct HmpidVerdict *verdict, struct HmpidParams **out);

/**
 * Largest absolute difference between the table and the recovered model.
 *
 * # Safety
 * Both handles must be live and `residual` writable.
 */
enum HmpidStatus hmpid_certify(const struct HmpidDistribution *dist,
                               const struct HmpidVerdict *verdict,
                               double *residual);

/**
 * Verdict with its trace as JSON. Free the result with [`hmpid_string_free`].
 *
 * # Safety
 * `verdict` must be a live handle and `out` writable.
 */
enum HmpidStatus hmpid_verdict_to_json(const struct HmpidVerdict *verdict, char **out);

/**
 * # Safety
 * `verdict` must be null or a handle not yet freed.
 */
void hmpid_verdict_free(struct HmpidVerdict *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HMPID_H */
