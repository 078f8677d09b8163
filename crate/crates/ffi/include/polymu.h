#ifndef POLYMU_H
#define POLYMU_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PolymuStatus {
  POLYMU_STATUS_OK = 0,
  POLYMU_STATUS_NULL_ARGUMENT = 1,
  POLYMU_STATUS_INVALID_UTF8 = 2,
  POLYMU_STATUS_PARSE_ERROR = 3,
  POLYMU_STATUS_INVALID_ARGUMENT = 4,
  POLYMU_STATUS_EVALUATION_ERROR = 5,
  POLYMU_STATUS_PANIC = 6,
} PolymuStatus;

typedef enum PolymuEngine {
  POLYMU_ENGINE_NAIVE = 0,
  POLYMU_ENGINE_GAME = 1,
} PolymuEngine;

typedef enum PolymuClass {
  POLYMU_CLASS_SIGMA = 0,
  POLYMU_CLASS_PI = 1,
} PolymuClass;

/**
 * Opaque formula handle.
 */
typedef struct PolymuFormula PolymuFormula;

/**
 * Opaque transition-system handle.
 */
typedef struct PolymuLts PolymuLts;

/**
 * Verdicts of a diagonal check: the formula on its encoding, and the
 * simulating formula on the same system. Exactly one should hold.
 */
typedef struct PolymuDiagReport {
  bool phi_holds;
  bool diag_holds;
  size_t states;
} PolymuDiagReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *polymu_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *polymu_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void polymu_string_free(char *s);

/**
 * Parses a closed or open formula.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PolymuStatus polymu_formula_parse(const char *text, struct PolymuFormula **out);

/**
 * # Safety
 * `phi` must be null or a handle from this library, not yet freed.
 */
void polymu_formula_free(struct PolymuFormula *phi);

/**
 * Concrete syntax of the formula; free with [`polymu_string_free`].
 * Returns null if `phi` is null.
 *
 * # Safety
 * `phi` must be null or a live handle.
 */
char *polymu_formula_to_string(const struct PolymuFormula *phi);

/**
 * Largest position mentioned by the formula (0 if none).
 *
 * # Safety
 * `phi` must be null or a live handle.
 */
size_t polymu_formula_arity(const struct PolymuFormula *phi);

/**
 * Σ and Π levels of the formula at its own arity.
 *
 * # Safety
 * `phi` must be a live handle; `sigma` and `pi` valid pointers.
 */
enum PolymuStatus polymu_formula_levels(const struct PolymuFormula *phi, size_t *sigma, size_t *pi);

/**
 * Rewrites every replacement into simple swaps and copies.
 *
 * # Safety
 * `phi` must be a live handle and `out` a valid pointer.
 */
enum PolymuStatus polymu_formula_normalize(const struct PolymuFormula *phi,
                                           struct PolymuFormula **out);

/**
 * Negation pushed to the literals.
 *
 * # Safety
 * `phi` must be a live handle and `out` a valid pointer.
 */
enum PolymuStatus polymu_formula_negate(const struct PolymuFormula *phi,
                                        struct PolymuFormula **out);

/**
 * Parses the line-based LTS format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PolymuStatus polymu_lts_parse(const char *text, struct PolymuLts **out);

/**
 * # Safety
 * `lts` must be null or a handle from this library, not yet freed.
 */
void polymu_lts_free(struct PolymuLts *lts);

/**
 * # Safety
 * `lts` must be null or a live handle.
 */
size_t polymu_lts_num_states(const struct PolymuLts *lts);

/**
 * # Safety
 * `lts` must be null or a live handle.
 */
size_t polymu_lts_init(const struct PolymuLts *lts);

/**
 * Text form of the system; free with [`polymu_string_free`].
 *
 * # Safety
 * `lts` must be null or a live handle.
 */
char *polymu_lts_to_string(const struct PolymuLts *lts);

/**
 * Decides `lts, tuple ⊨ phi`. A null `tuple` with `len == 0` is the empty
 * tuple.
 *
 * # Safety
 * Handles must be live; `tuple` must point to `len` readable values; `out`
 * must be valid.
 */
enum PolymuStatus polymu_check(enum PolymuEngine engine_,
                               const struct PolymuFormula *phi,
                               const struct PolymuLts *lts,
                               const size_t *tuple,
                               size_t len,
                               bool *out);

/**
 * Whether states `s` and `t` are bisimilar.
 *
 * # Safety
 * `lts` must be a live handle and `out` valid.
 */
enum PolymuStatus polymu_bisimilar(const struct PolymuLts *lts, size_t s, size_t t, bool *out);

/**
 * Encodes a closed formula as a transition system over the propositions
 * `props`, or over the fixed ten-letter signature when `fixed` is set (then
 * `k` bounds the arity and `props` is ignored).
 *
 * # Safety
 * `phi` must be live; `props` must point to `nprops` NUL-terminated strings
 * (may be null when `nprops == 0`); `out` must be valid.
 */
enum PolymuStatus polymu_encode(const struct PolymuFormula *phi,
                                bool fixed,
                                size_t k,
                                const char *const *props,
                                size_t nprops,
                                struct PolymuLts **out);

/**
 * The simulating formula of arity `k + 1` and level `m`; `dual` selects the
 * Π variant.
 *
 * # Safety
 * As for [`polymu_encode`].
 */
enum PolymuStatus polymu_diagonal_formula(size_t k,
                                          size_t m,
                                          bool fixed,
                                          const char *const *props,
                                          size_t nprops,
                                          bool dual,
                                          struct PolymuFormula **out);

/**
 * Evaluates `phi` and the simulating formula on the encoding of `phi`.
 *
 * # Safety
 * As for [`polymu_encode`].
 */
enum PolymuStatus polymu_diagonal_check(const struct PolymuFormula *phi,
                                        size_t k,
                                        size_t m,
                                        enum PolymuClass class_,
                                        enum PolymuEngine engine_,
                                        bool fixed,
                                        const char *const *props,
                                        size_t nprops,
                                        struct PolymuDiagReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYMU_H */
