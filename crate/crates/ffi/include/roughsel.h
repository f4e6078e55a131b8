#ifndef ROUGHSEL_H
#define ROUGHSEL_H

/* Generated by cbindgen from roughsel-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of a toolkit call.
 */
typedef enum RsStatus {
  /**
   * The call succeeded.
   */
  RS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RS_STATUS_NULL_POINTER = 1,
  /**
   * An argument value was out of range or inconsistent.
   */
  RS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The input data could not be read or fails validation.
   */
  RS_STATUS_DATA_ERROR = 3,
  /**
   * An internal invariant failed; the handle state is unchanged.
   */
  RS_STATUS_PANIC = 4,
} RsStatus;

/**
 * A fitted fuzzy C-Means model (opaque).
 */
typedef struct RsFcm RsFcm;

/**
 * A fitted K-Means model (opaque).
 */
typedef struct RsKMeans RsKMeans;

/**
 * A finished attribute selection (opaque).
 */
typedef struct RsReduct RsReduct;

/**
 * A discretized decision table (opaque).
 */
typedef struct RsTable RsTable;

/**
 * An exact dependency-degree fraction.
 */
typedef struct RsGamma {
  size_t numerator;
  size_t denominator;
} RsGamma;

/**
 * Binary confusion counts and rates. Rates are NaN when their defining
 * class is absent from the truth labels.
 */
typedef struct RsConfusion {
  size_t true_positives;
  size_t false_positives;
  size_t true_negatives;
  size_t false_negatives;
  size_t n;
  double accuracy;
  double error;
  double tp_rate;
  double fn_rate;
  double tn_rate;
  double fp_rate;
} RsConfusion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if no call
 * has failed yet. The pointer stays valid until the next failing call on
 * the same thread; do not free it.
 */
const char *rs_last_error(void);

/**
 * Releases a string returned through an out-pointer.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library, or null.
 */
void rs_string_free(char *s);

/**
 * The library version as a static string; do not free it.
 */
const char *rs_version(void);

/**
 * Builds a decision table from integer codes. `codes` is row-major with
 * `n_rows * n_cols` entries; `decision` has `n_rows` entries. Attributes
 * are named a0, a1, ….
 *
 * # Safety
 * The pointers must be valid for the stated lengths, and `out` must be a
 * valid location to store the new handle.
 */
enum RsStatus rs_table_from_codes(const size_t *codes,
                                  size_t n_rows,
                                  size_t n_cols,
                                  const size_t *decision,
                                  struct RsTable **out);

/**
 * Loads a headered comma-separated file whose last column is the class,
 * discretizes every attribute into `bins` codes, and returns the table.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid location.
 */
enum RsStatus rs_table_discretize_csv(const char *path,
                                      size_t bins,
                                      uint64_t seed,
                                      struct RsTable **out);

/**
 * Number of samples in the table; 0 for a null handle.
 */
size_t rs_table_rows(const struct RsTable *table);

/**
 * Number of condition attributes in the table; 0 for a null handle.
 */
size_t rs_table_attributes(const struct RsTable *table);

/**
 * Releases a table handle.
 *
 * # Safety
 * `table` must come from this library, or be null.
 */
void rs_table_free(struct RsTable *table);

/**
 * Dependency degree of the decision on the given attribute subset, as an
 * exact fraction. `attrs` may be null when `attrs_len` is 0 (the empty
 * set).
 *
 * # Safety
 * `attrs` must hold `attrs_len` indices and `out` must be valid.
 */
enum RsStatus rs_gamma(const struct RsTable *table,
                       const size_t *attrs,
                       size_t attrs_len,
                       struct RsGamma *out);

/**
 * Runs the greedy attribute selection on a table.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid location.
 */
enum RsStatus rs_quick_reduct(const struct RsTable *table, struct RsReduct **out);

/**
 * Number of selected attributes; 0 for a null handle.
 */
size_t rs_reduct_len(const struct RsReduct *reduct);

/**
 * The `index`-th selected attribute (in selection order).
 *
 * # Safety
 * `reduct` must be a live handle and `out` a valid location.
 */
enum RsStatus rs_reduct_attribute(const struct RsReduct *reduct, size_t index, size_t *out);

/**
 * The dependency degree of the full attribute set.
 *
 * # Safety
 * `reduct` must be a live handle and `out` a valid location.
 */
enum RsStatus rs_reduct_gamma(const struct RsReduct *reduct, struct RsGamma *out);

/**
 * Whether the selection reproduces the full dependency degree; false for a
 * null handle.
 */
bool rs_reduct_reached_full(const struct RsReduct *reduct);

/**
 * Serializes the selection (indices, names, trace) as a JSON string the
 * caller frees with [`rs_string_free`].
 *
 * # Safety
 * `reduct` must be a live handle and `out` a valid location.
 */
enum RsStatus rs_reduct_to_json(const struct RsReduct *reduct, char **out);

/**
 * Releases a reduct handle.
 *
 * # Safety
 * `reduct` must come from this library, or be null.
 */
void rs_reduct_free(struct RsReduct *reduct);

/**
 * Fits K-Means on row-major data of shape `n_rows x n_cols`.
 *
 * # Safety
 * `data` must hold `n_rows * n_cols` values and `out` must be valid.
 */
enum RsStatus rs_kmeans_fit(const double *data,
                            size_t n_rows,
                            size_t n_cols,
                            size_t k,
                            uint64_t seed,
                            size_t max_iter,
                            double tol,
                            struct RsKMeans **out);

/**
 * Number of clustered points; 0 for a null handle.
 */
size_t rs_kmeans_points(const struct RsKMeans *model);

/**
 * Number of clusters; 0 for a null handle.
 */
size_t rs_kmeans_k(const struct RsKMeans *model);

/**
 * Column count of the fitted data; 0 for a null handle.
 */
size_t rs_kmeans_dim(const struct RsKMeans *model);

/**
 * Final within-cluster sum of squares; NaN for a null handle.
 */
double rs_kmeans_inertia(const struct RsKMeans *model);

/**
 * Whether the fit converged before the iteration cap; false for a null
 * handle.
 */
bool rs_kmeans_converged(const struct RsKMeans *model);

/**
 * Copies the per-point cluster ids into `out` (length
 * [`rs_kmeans_points`]).
 *
 * # Safety
 * `model` must be a live handle and `out` sized to the point count.
 */
enum RsStatus rs_kmeans_assignments(const struct RsKMeans *model, size_t *out);

/**
 * Copies the centroids row-major into `out` (length
 * [`rs_kmeans_k`] * [`rs_kmeans_dim`]).
 *
 * # Safety
 * `model` must be a live handle and `out` sized to `k * dim`.
 */
enum RsStatus rs_kmeans_centroids(const struct RsKMeans *model, double *out);

/**
 * Releases a K-Means handle.
 *
 * # Safety
 * `model` must come from this library, or be null.
 */
void rs_kmeans_free(struct RsKMeans *model);

/**
 * Fits fuzzy C-Means on row-major data of shape `n_rows x n_cols` with
 * fuzziness `m` (> 1).
 *
 * # Safety
 * `data` must hold `n_rows * n_cols` values and `out` must be valid.
 */
enum RsStatus rs_fcm_fit(const double *data,
                         size_t n_rows,
                         size_t n_cols,
                         size_t c,
                         double m,
                         uint64_t seed,
                         size_t max_iter,
                         double tol,
                         struct RsFcm **out);

/**
 * Number of clustered points; 0 for a null handle.
 */
size_t rs_fcm_points(const struct RsFcm *model);

/**
 * Number of clusters; 0 for a null handle.
 */
size_t rs_fcm_clusters(const struct RsFcm *model);

/**
 * Whether the fit converged before the iteration cap; false for a null
 * handle.
 */
bool rs_fcm_converged(const struct RsFcm *model);

/**
 * Copies the membership matrix row-major into `out` (length
 * [`rs_fcm_points`] * [`rs_fcm_clusters`]).
 *
 * # Safety
 * `model` must be a live handle and `out` sized to `points * clusters`.
 */
enum RsStatus rs_fcm_membership(const struct RsFcm *model, double *out);

/**
 * Copies the argmax cluster of each point into `out` (length
 * [`rs_fcm_points`]).
 *
 * # Safety
 * `model` must be a live handle and `out` sized to the point count.
 */
enum RsStatus rs_fcm_hard_assignments(const struct RsFcm *model, size_t *out);

/**
 * Releases a fuzzy C-Means handle.
 *
 * # Safety
 * `model` must come from this library, or be null.
 */
void rs_fcm_free(struct RsFcm *model);

/**
 * Confusion counts and rates of `predicted` against `truth` (both length
 * `len`), treating `positive_class` as the positive label. Undefined rates
 * come back as NaN.
 *
 * # Safety
 * The label pointers must hold `len` values and `out` must be valid.
 */
enum RsStatus rs_confusion(const size_t *predicted,
                           const size_t *truth,
                           size_t len,
                           size_t positive_class,
                           struct RsConfusion *out);

/**
 * Maps cluster ids onto class labels (best bijection for equal counts,
 * majority vote otherwise), writes the mapped labels into `out_mapped`
 * (length `len`), and stores the mapped accuracy.
 *
 * # Safety
 * The id pointers must hold `len` values; `out_mapped` must have room for
 * `len` values; `out_accuracy` must be valid.
 */
enum RsStatus rs_map_clusters(const size_t *cluster_ids,
                              const size_t *true_classes,
                              size_t len,
                              size_t *out_mapped,
                              double *out_accuracy);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUGHSEL_H */
