#ifndef QCONCAVE_H
#define QCONCAVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every entry point.
 */
typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  /**
   * Matrix or Bloch vector does not describe a valid state.
   */
  QC_STATUS_INVALID_STATE = 2,
  QC_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * Parameter outside its domain (order, weight, tolerance, rank).
   */
  QC_STATUS_INVALID_ARGUMENT = 4,
  /**
   * Quantity undefined for this input, such as Kim's bound near `x = ½`.
   */
  QC_STATUS_NOT_APPLICABLE = 5,
  /**
   * The two states coincide.
   */
  QC_STATUS_DEGENERATE = 6,
  QC_STATUS_PANIC = 7,
} QcStatus;

/**
 * Scalar fields of a report.
 */
typedef enum QcQuantity {
  QC_QUANTITY_GAP = 0,
  /**
   * Kim's bound; `NotApplicable` near `x = ½`.
   */
  QC_QUANTITY_LOWBD0 = 1,
  /**
   * `½ x(1−x) ‖ρ1 − ρ2‖₁²`.
   */
  QC_QUANTITY_LOWBD1 = 2,
  /**
   * Carlen–Lieb.
   */
  QC_QUANTITY_LOWBD2 = 3,
  QC_QUANTITY_BLOCK_PINSKER = 4,
  /**
   * `h(x)`.
   */
  QC_QUANTITY_UPBD = 5,
  QC_QUANTITY_RFZ_BURES = 6,
  QC_QUANTITY_RFZ_TRACE = 7,
  QC_QUANTITY_AUDENAERT = 8,
  QC_QUANTITY_MAX_ABS_SLACK = 9,
} QcQuantity;

/**
 * Which checked relations count toward `qc_report_checks_ok`.
 */
typedef enum QcChecks {
  QC_CHECKS_ALL = 0,
  /**
   * All but the cited Kim and Bures bounds.
   */
  QC_CHECKS_CORE = 1,
  /**
   * `lowbd1 ≤ gap ≤ audenaert`.
   */
  QC_CHECKS_THEOREM1 = 2,
} QcChecks;

typedef enum QcWinner {
  QC_WINNER_LOWBD0 = 0,
  QC_WINNER_LOWBD1 = 1,
  QC_WINNER_LOWBD2 = 2,
  QC_WINNER_TIE = 3,
} QcWinner;

/**
 * A validated density matrix.
 */
typedef struct QcDensity QcDensity;

/**
 * Weight `x` with two states of equal dimension.
 */
typedef struct QcProblem QcProblem;

/**
 * The gap, every bound and every checked relation for one problem.
 */
typedef struct QcReport QcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qc_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *qc_version(void);

/**
 * Qubit state `(I + w·σ)/2` from `w[0..3]`.
 */
enum QcStatus qc_density_from_bloch(const double *w, struct QcDensity **out);

/**
 * State from row-major real and imaginary parts, `dim * dim` entries each.
 * `im` may be null for a real matrix.
 */
enum QcStatus qc_density_from_parts(size_t dim,
                                    const double *re,
                                    const double *im,
                                    struct QcDensity **out);

/**
 * Seeded random state of the given rank.
 */
enum QcStatus qc_density_random(size_t dim, size_t rank, uint64_t seed, struct QcDensity **out);

void qc_density_free(struct QcDensity *rho);

enum QcStatus qc_density_dim(const struct QcDensity *rho, size_t *out);

/**
 * Ascending eigenvalues into `out[0..len]`; `len` must be at least the dimension.
 */
enum QcStatus qc_density_eigenvalues(const struct QcDensity *rho, double *out, size_t len);

enum QcStatus qc_von_neumann(const struct QcDensity *rho, double *out);

/**
 * `H(ρ, γ)`; `+inf` when the support of `ρ` leaves that of `γ`.
 */
enum QcStatus qc_relative_entropy(const struct QcDensity *rho,
                                  const struct QcDensity *gamma,
                                  double *out);

/**
 * Standard (Petz) Renyi divergence of the given order; may be `+inf`.
 */
enum QcStatus qc_renyi(double order,
                       const struct QcDensity *rho,
                       const struct QcDensity *gamma,
                       double *out);

/**
 * Sandwiched Renyi divergence, order at least ½; may be `+inf`.
 */
enum QcStatus qc_sandwiched(double order,
                            const struct QcDensity *rho,
                            const struct QcDensity *gamma,
                            double *out);

enum QcStatus qc_max_relative(const struct QcDensity *rho,
                              const struct QcDensity *gamma,
                              double *out);

/**
 * `Tr(√ρ γ √ρ)^{1/2}`.
 */
enum QcStatus qc_fidelity(const struct QcDensity *rho, const struct QcDensity *gamma, double *out);

enum QcStatus qc_bures_sq(const struct QcDensity *rho, const struct QcDensity *gamma, double *out);

/**
 * `‖ρ − γ‖₁`, without the factor ½.
 */
enum QcStatus qc_trace_distance(const struct QcDensity *rho,
                                const struct QcDensity *gamma,
                                double *out);

enum QcStatus qc_binary_entropy(double x, double *out);

/**
 * Copies both states; the caller keeps ownership of `rho1` and `rho2`.
 */
enum QcStatus qc_problem_new(double x,
                             const struct QcDensity *rho1,
                             const struct QcDensity *rho2,
                             struct QcProblem **out);

void qc_problem_free(struct QcProblem *problem);

/**
 * Full report with the given slack tolerance on every checked relation.
 */
enum QcStatus qc_report_new(const struct QcProblem *problem,
                            double tolerance,
                            struct QcReport **out);

void qc_report_free(struct QcReport *report);

enum QcStatus qc_report_get(const struct QcReport *report, enum QcQuantity quantity, double *out);

/**
 * Whether every relation in the selected group holds.
 */
enum QcStatus qc_report_checks_ok(const struct QcReport *report, enum QcChecks checks, bool *out);

/**
 * `lowbd1` against `lowbd2`.
 */
enum QcStatus qc_report_winner(const struct QcReport *report, enum QcWinner *out);

/**
 * The report as JSON; release with [`qc_string_free`].
 */
enum QcStatus qc_report_to_json(const struct QcReport *report, char **out);

/**
 * Critical Renyi orders as JSON; release with [`qc_string_free`].
 */
enum QcStatus qc_critical_params_json(const struct QcProblem *problem,
                                      double tolerance,
                                      char **out);

void qc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCONCAVE_H */
