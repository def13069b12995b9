#ifndef SURFEX_H
#define SURFEX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call. Values 2, 3 and 4 match the command-line exit codes.
 */
typedef enum SurfexStatus {
  SURFEX_STATUS_OK = 0,
  SURFEX_STATUS_IO = 1,
  SURFEX_STATUS_PRECONDITION = 2,
  SURFEX_STATUS_SCALE_REFUSAL = 3,
  SURFEX_STATUS_NON_CONVERGENCE = 4,
  SURFEX_STATUS_NULL_POINTER = 10,
  SURFEX_STATUS_INVALID_UTF8 = 11,
  SURFEX_STATUS_PANIC = 12,
} SurfexStatus;

/**
 * Opaque graph handle.
 */
typedef struct SurfexGraph SurfexGraph;

/**
 * Opaque embedding scheme handle.
 */
typedef struct SurfexScheme SurfexScheme;

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *surfex_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void surfex_string_free(char *s);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SurfexStatus surfex_graph_from_graph6(const char *text, struct SurfexGraph **out);

/**
 * A member of EX(n, γ) with dominating pair 0, 1 and path 2, …, n−1.
 *
 * # Safety
 * `out` must be writable.
 */
enum SurfexStatus surfex_construct_ex(size_t n, size_t gamma, struct SurfexGraph **out);

/**
 * K₂ ∇ K_{γ+3}^{n−2} for γ ∈ {1, 2} with an embedding of Euler genus γ.
 *
 * # Safety
 * Both out pointers must be writable.
 */
enum SurfexStatus surfex_extremal_candidate(size_t n,
                                            size_t gamma,
                                            struct SurfexGraph **graph_out,
                                            struct SurfexScheme **scheme_out);

/**
 * # Safety
 * `g` must come from this library or be null.
 */
void surfex_graph_free(struct SurfexGraph *g);

/**
 * Number of vertices, 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t surfex_graph_order(const struct SurfexGraph *g);

/**
 * Number of edges, 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t surfex_graph_size(const struct SurfexGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable. Free the result with
 * [`surfex_string_free`].
 */
enum SurfexStatus surfex_graph_to_graph6(const struct SurfexGraph *g, char **out);

/**
 * Spectral radius to relative residual `tol`.
 *
 * # Safety
 * `g` must be a live handle; `rho` must be writable.
 */
enum SurfexStatus surfex_spectral_radius(const struct SurfexGraph *g, double tol, double *rho);

/**
 * Spectral radius of K₂ ∇ C_{n−2}.
 *
 * # Safety
 * `rho` must be writable.
 */
enum SurfexStatus surfex_rho0(size_t n, double *rho);

/**
 * Number of walks of length `l` as a decimal string.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable. Free the result with
 * [`surfex_string_free`].
 */
enum SurfexStatus surfex_walk_count(const struct SurfexGraph *g, size_t l, char **out);

/**
 * Whether `h` is a minor of `g`.
 *
 * # Safety
 * Both handles must be live; `result` must be writable.
 */
enum SurfexStatus surfex_has_minor(const struct SurfexGraph *g,
                                   const struct SurfexGraph *h,
                                   bool *result);

/**
 * Minimum Euler genus with the default search limits. `exact` is false
 * when the value came from annealing.
 *
 * # Safety
 * `g` must be a live handle; the out pointers must be writable.
 */
enum SurfexStatus surfex_min_euler_genus(const struct SurfexGraph *g,
                                         bool orientable_only,
                                         size_t *genus,
                                         bool *exact);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SurfexStatus surfex_scheme_from_json(const char *json, struct SurfexScheme **out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable. Free the result with
 * [`surfex_string_free`].
 */
enum SurfexStatus surfex_scheme_to_json(const struct SurfexScheme *s, char **out);

/**
 * Face count, Euler genus and orientability of a scheme.
 *
 * # Safety
 * `s` must be a live handle; the out pointers must be writable.
 */
enum SurfexStatus surfex_scheme_trace(const struct SurfexScheme *s,
                                      size_t *faces,
                                      size_t *genus,
                                      bool *orientable);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void surfex_scheme_free(struct SurfexScheme *s);

#endif  /* SURFEX_H */
