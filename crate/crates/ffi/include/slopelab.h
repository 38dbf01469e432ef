#ifndef SLOPELAB_H
#define SLOPELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define SL_SIDE_LEFT 0

#define SL_SIDE_RIGHT 1

#define SL_SIDE_BOTH 2

#define SL_GIT_UNSTABLE 0

#define SL_GIT_STABLE 1

#define SL_GIT_SEMISTABLE 2

#define SL_GIT_LIKELY_SEMISTABLE 3

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_INPUT = 2,
  SL_STATUS_DEGENERATE = 3,
  SL_STATUS_BUDGET_EXHAUSTED = 4,
  SL_STATUS_BUFFER_TOO_SMALL = 5,
  SL_STATUS_INTERNAL = 6,
} SlStatus;

typedef struct SlFiltration SlFiltration;

typedef struct SlLattice SlLattice;

typedef struct SlSubspace SlSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the last failed call on this thread into `buf`.
 *
 * # Safety
 * `buf` must be writable for `len` bytes; `needed` may be null.
 */
enum SlStatus sl_last_error(char *buf, uintptr_t len, uintptr_t *needed);

/**
 * Lattice with the integer Gram matrix given row-major.
 *
 * # Safety
 * `gram` must point to `rank * rank` values and `out` must be writable.
 */
enum SlStatus sl_lattice_new(const int64_t *gram, uintptr_t rank, struct SlLattice **out);

/**
 * Lattice from the JSON file format (`{"label", "gram"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum SlStatus sl_lattice_from_json(const char *json, struct SlLattice **out);

/**
 * # Safety
 * `l` must come from this library and not be used afterwards; null is ignored.
 */
void sl_lattice_free(struct SlLattice *l);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_lattice_rank(const struct SlLattice *l, uintptr_t *out);

/**
 * Normalized degree as a double, with its exact form written into `buf`.
 *
 * # Safety
 * Pointers must be valid; `buf` may be null when `len` is 0.
 */
enum SlStatus sl_lattice_ndeg(const struct SlLattice *l,
                              double *value,
                              char *buf,
                              uintptr_t len,
                              uintptr_t *needed);

/**
 * Maximal slope; `exact` is 1 when certified exact and 0 when only a lower bound.
 *
 * # Safety
 * Pointers must be valid; `buf` may be null when `len` is 0.
 */
enum SlStatus sl_lattice_max_slope(const struct SlLattice *l,
                                   double *value,
                                   int *exact,
                                   char *buf,
                                   uintptr_t len,
                                   uintptr_t *needed);

/**
 * 1 semistable, 0 unstable, -1 undecided within budget.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_lattice_is_semistable(const struct SlLattice *l, int *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_lattice_dual(const struct SlLattice *l, struct SlLattice **out);

/**
 * Kronecker product, basis `e_i ⊗ f_j` at index `i * rank(b) + j`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_lattice_tensor(const struct SlLattice *a,
                                const struct SlLattice *b,
                                struct SlLattice **out);

/**
 * Subspace of `E ⊗ F` from JSON; file references are resolved against `base_dir` (may be null).
 *
 * # Safety
 * `json` and `base_dir` must be NUL-terminated strings or null, `out` writable.
 */
enum SlStatus sl_subspace_from_json(const char *json,
                                    const char *base_dir,
                                    struct SlSubspace **out);

/**
 * # Safety
 * `v` must come from this library and not be used afterwards; null is ignored.
 */
void sl_subspace_free(struct SlSubspace *v);

/**
 * Semistability of `V` on one side (`SL_SIDE_*`); `status` receives an `SL_GIT_*` value and
 * the witness, if any, is written into `buf`.
 *
 * # Safety
 * Pointers must be valid; `buf` may be null when `len` is 0.
 */
enum SlStatus sl_git_check(const struct SlSubspace *v,
                           int side,
                           uint64_t seed,
                           int *status,
                           char *buf,
                           uintptr_t len,
                           uintptr_t *needed);

/**
 * Filtration from JSON (`{"dim", "steps"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum SlStatus sl_filtration_from_json(const char *json, struct SlFiltration **out);

/**
 * # Safety
 * `f` must come from this library and not be used afterwards; null is ignored.
 */
void sl_filtration_free(struct SlFiltration *f);

/**
 * Expectation as a double and as an exact `a/b` string.
 *
 * # Safety
 * Pointers must be valid; `buf` may be null when `len` is 0.
 */
enum SlStatus sl_filtration_expectation(const struct SlFiltration *f,
                                        double *value,
                                        char *buf,
                                        uintptr_t len,
                                        uintptr_t *needed);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_filtration_tensor(const struct SlFiltration *f,
                                   const struct SlFiltration *g,
                                   struct SlFiltration **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SlStatus sl_filtration_dual(const struct SlFiltration *f, struct SlFiltration **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLOPELAB_H */
