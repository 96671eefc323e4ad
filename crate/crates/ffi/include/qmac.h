#ifndef QMAC_H
#define QMAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QmacStatus {
  QMAC_STATUS_OK = 0,
  QMAC_STATUS_NULL_POINTER = 1,
  QMAC_STATUS_INVALID_UTF8 = 2,
  QMAC_STATUS_INVALID_JSON = 3,
  QMAC_STATUS_INVALID_INPUT = 4,
  QMAC_STATUS_COMPUTATION_ERROR = 5,
  QMAC_STATUS_DIMENSION_CAP_EXCEEDED = 6,
  QMAC_STATUS_BUFFER_TOO_SMALL = 7,
  QMAC_STATUS_PANIC = 8,
} QmacStatus;

/**
 * Opaque signal ensemble.
 */
typedef struct QmacEnsemble QmacEnsemble;

/**
 * Opaque convex rate region.
 */
typedef struct QmacRegion QmacRegion;

typedef struct QmacEntropyProfile {
  double h_joint;
  double h_cond_a;
  double h_cond_b;
} QmacEntropyProfile;

typedef struct QmacRatePair {
  double r1;
  double r2;
} QmacRatePair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next `qmac_*` call on the same thread.
 */
const char *qmac_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qmac_version(void);

/**
 * Parses and validates an ensemble from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer. On
 * success `*out` owns a handle to release with [`qmac_ensemble_free`].
 */
enum QmacStatus qmac_ensemble_from_json(const char *json, struct QmacEnsemble **out);

/**
 * The four-state qubit ensemble `|0>, |1>, |+>, |->` with uniform letters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QmacStatus qmac_ensemble_two_basis_example(struct QmacEnsemble **out);

/**
 * # Safety
 * `ensemble` must be null or a handle from this library not yet freed.
 */
void qmac_ensemble_free(struct QmacEnsemble *ensemble);

/**
 * `H(rho)`, `H_A` and `H_B` in bits.
 *
 * # Safety
 * `ensemble` must be a live handle and `out` a valid pointer.
 */
enum QmacStatus qmac_entropy_profile(const struct QmacEnsemble *ensemble,
                                     struct QmacEntropyProfile *out);

/**
 * Pentagon of the ensemble's own letter distributions.
 *
 * # Safety
 * `ensemble` must be a live handle and `out` a valid pointer. On success
 * `*out` must be released with [`qmac_region_free`].
 */
enum QmacStatus qmac_region_pentagon(const struct QmacEnsemble *ensemble, struct QmacRegion **out);

/**
 * Convex hull of the pentagons over a grid of product distributions with
 * spacing `grid_step` (which must divide 1).
 *
 * # Safety
 * As [`qmac_region_pentagon`].
 */
enum QmacStatus qmac_region_union_grid(const struct QmacEnsemble *ensemble,
                                       double grid_step,
                                       struct QmacRegion **out);

/**
 * # Safety
 * `region` must be null or a handle from this library not yet freed.
 */
void qmac_region_free(struct QmacRegion *region);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `region` must be null or a live handle.
 */
size_t qmac_region_vertex_count(const struct QmacRegion *region);

/**
 * Copies the counterclockwise vertex list into `buffer`. `*written` is
 * always set to the vertex count; [`QmacStatus::BufferTooSmall`] is returned
 * when `capacity` is below it.
 *
 * # Safety
 * `region` must be a live handle, `buffer` must point to `capacity`
 * writable elements (or be null when `capacity` is 0) and `written` must be
 * a valid pointer.
 */
enum QmacStatus qmac_region_vertices(const struct QmacRegion *region,
                                     struct QmacRatePair *buffer,
                                     size_t capacity,
                                     size_t *written);

/**
 * # Safety
 * `region` must be a live handle and `out` a valid pointer.
 */
enum QmacStatus qmac_region_contains(const struct QmacRegion *region,
                                     struct QmacRatePair rate,
                                     double tol,
                                     bool *out);

/**
 * # Safety
 * `region` must be a live handle and `out` a valid pointer.
 */
enum QmacStatus qmac_region_area(const struct QmacRegion *region, double *out);

/**
 * `lambda * a + (1 - lambda) * b` for `lambda` in `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QmacStatus qmac_time_share(struct QmacRatePair a,
                                struct QmacRatePair b,
                                double lambda,
                                struct QmacRatePair *out);

/**
 * Exact error probability of the two-stage decoder on a codebook given as
 * JSON `{"length_L": L, "alice_strings": [...], "bob_strings": [...]}`.
 * A `dimension_cap` of 0 selects the default cap.
 *
 * # Safety
 * `ensemble` must be a live handle, `codebook_json` a NUL-terminated string
 * and `out` a valid pointer.
 */
enum QmacStatus qmac_error_probability(const struct QmacEnsemble *ensemble,
                                       const char *codebook_json,
                                       double delta,
                                       size_t dimension_cap,
                                       double *out);

/**
 * Entanglement entropy of `sum_i a_i |i>|i>` from the `n` Schmidt
 * amplitudes `a_i` (squares summing to 1).
 *
 * # Safety
 * `amplitudes` must point to `n` readable doubles and `out` must be valid.
 */
enum QmacStatus qmac_entanglement_entropy(const double *amplitudes, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMAC_H */
