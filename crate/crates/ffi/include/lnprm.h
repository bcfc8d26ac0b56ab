#ifndef LNPRM_H
#define LNPRM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  LNPRM_STATUS_OK = 0,
  LNPRM_STATUS_NULL_POINTER = 1,
  LNPRM_STATUS_TOO_FEW_OBSERVATIONS = 2,
  LNPRM_STATUS_TIED_EXTREME = 3,
  LNPRM_STATUS_NON_FINITE_VALUE = 4,
  LNPRM_STATUS_INVALID_LAMBDA = 5,
  LNPRM_STATUS_NEGATIVE_LAMBDA = 6,
  LNPRM_STATUS_DOMAIN_VIOLATION = 7,
  LNPRM_STATUS_ALPHA_OUT_OF_DOMAIN = 8,
  LNPRM_STATUS_EMPTY_PROFILE = 9,
  LNPRM_STATUS_INVALID_CONFIG = 10,
  LNPRM_STATUS_PARSE = 11,
  LNPRM_STATUS_UNKNOWN_DATASET = 12,
  LNPRM_STATUS_IO = 13,
  LNPRM_STATUS_INDEX_OUT_OF_RANGE = 14,
  LNPRM_STATUS_PANIC = 15,
} LnprmStatus;

typedef enum {
  LNPRM_BRANCH_POSITIVE = 0,
  LNPRM_BRANCH_NEGATIVE = 1,
} LnprmBranch;

/**
 * Opaque traced profile branch.
 */
typedef struct LnprmProfile LnprmProfile;

/**
 * Opaque validated sample.
 */
typedef struct LnprmSample LnprmSample;

/**
 * Search constants. When `use_delta0` is false the first grid point of
 * each branch starts from the population standard deviation.
 */
typedef struct {
  bool use_delta0;
  double delta0;
  double eps0;
  double eps1;
  double eps2;
  double lambda_max_pos;
  double lambda_min_neg;
  double dlambda;
} LnprmSearchConfig;

/**
 * Refined estimate. All parameter fields are NaN when `found` is false;
 * the classic fields are NaN unless `has_classic` is true.
 */
typedef struct {
  bool found;
  double lambda;
  double tau;
  double s;
  double mu;
  double sigma;
  bool has_classic;
  double alpha;
  double beta;
  double gamma;
  double f_value;
  double log_likelihood;
  double lambda_resolution;
} LnprmEstimate;

typedef struct {
  double lambda;
  double tau0;
  double f_value;
  double s_hat;
  double residual;
} LnprmProfilePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *lnprm_status_message(LnprmStatus status);

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *lnprm_last_error(void);

LnprmSearchConfig lnprm_search_config_default(void);

/**
 * Validates `len` observations and stores a new sample in `*out`.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
LnprmStatus lnprm_sample_new(const double *values, size_t len, LnprmSample **out);

/**
 * Built-in dataset `index` (1 to 6).
 *
 * # Safety
 * `out` must be writable.
 */
LnprmStatus lnprm_builtin_dataset(size_t index, LnprmSample **out);

/**
 * # Safety
 * `sample` must be NULL or a handle from this library not yet freed.
 */
void lnprm_sample_free(LnprmSample *sample);

/**
 * Number of observations, 0 for NULL.
 *
 * # Safety
 * `sample` must be NULL or a live handle.
 */
size_t lnprm_sample_len(const LnprmSample *sample);

/**
 * Population standard deviation, the starting `tau` near `lambda = 0`.
 * NaN for NULL.
 *
 * # Safety
 * `sample` must be NULL or a live handle.
 */
double lnprm_tau_star(const LnprmSample *sample);

/**
 * # Safety
 * `sample` must be a live handle; `out` must be writable.
 */
LnprmStatus lnprm_f_objective(const LnprmSample *sample, double lambda, double tau, double *out);

/**
 * # Safety
 * `sample` must be a live handle; `out` must be writable.
 */
LnprmStatus lnprm_df_dtau(const LnprmSample *sample, double lambda, double tau, double *out);

/**
 * Open interval that contains the root of `dF/dtau` at `lambda`.
 *
 * # Safety
 * `sample` must be a live handle; `lower` and `upper` must be writable.
 */
LnprmStatus lnprm_tau_bracket(const LnprmSample *sample,
                              double lambda,
                              double *lower,
                              double *upper);

/**
 * Full search: trace both branches, detect and refine. A sample without a
 * maximum returns `Ok` with `found == false`.
 *
 * # Safety
 * `sample` must be a live handle, `config` readable and `out` writable.
 */
LnprmStatus lnprm_estimate(const LnprmSample *sample,
                           const LnprmSearchConfig *config,
                           LnprmEstimate *out);

/**
 * Traces one branch of the profile on the coarse grid.
 *
 * # Safety
 * `sample` must be a live handle, `config` readable and `out` writable.
 */
LnprmStatus lnprm_profile_trace(const LnprmSample *sample,
                                const LnprmSearchConfig *config,
                                LnprmBranch branch,
                                LnprmProfile **out);

/**
 * Number of recorded points, 0 for NULL.
 *
 * # Safety
 * `profile` must be NULL or a live handle.
 */
size_t lnprm_profile_len(const LnprmProfile *profile);

/**
 * Point `index`, ordered by increasing `|lambda|`.
 *
 * # Safety
 * `profile` must be a live handle; `out` must be writable.
 */
LnprmStatus lnprm_profile_point(const LnprmProfile *profile, size_t index, LnprmProfilePoint *out);

/**
 * # Safety
 * `profile` must be NULL or a handle from this library not yet freed.
 */
void lnprm_profile_free(LnprmProfile *profile);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LNPRM_H */
