#ifndef RCMS_H
#define RCMS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RcmsStatus {
  RCMS_STATUS_OK = 0,
  RCMS_STATUS_NULL_POINTER = 1,
  RCMS_STATUS_INVALID_ARGUMENT = 2,
  RCMS_STATUS_UNSUPPORTED = 3,
  RCMS_STATUS_OUT_OF_RANGE = 4,
  RCMS_STATUS_INTERNAL = 5,
} RcmsStatus;

// Class representatives of one order.
typedef struct RcmsClassList RcmsClassList;

// Merged graph records of one order.
typedef struct RcmsGraphTable RcmsGraphTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *rcms_last_error(void);

// Library version as a static NUL-terminated string.
const char *rcms_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void rcms_string_free(char *s);

// Number of `m × m` squares with all margins `d`, as a decimal string.
//
// # Safety
// `out` must be a valid pointer; the result is freed with
// `rcms_string_free`.
enum RcmsStatus rcms_count_total(uint32_t m, uint8_t d, char **out);

// Number of equivalence classes under row and column permutations.
//
// # Safety
// `out` must be a valid pointer.
enum RcmsStatus rcms_class_count(uint32_t m, uint8_t d, uint64_t *out);

// Whether two `m × m` squares are related by row and column permutations.
//
// # Safety
// `a` and `b` must each point to `m * m` bytes; `out` must be valid.
enum RcmsStatus rcms_matrix_equivalent(uint32_t m, const uint8_t *a, const uint8_t *b, bool *out);

// Class representatives of order `m` and margin `d`.
//
// # Safety
// `out` must be valid; the list is freed with `rcms_class_list_free`.
enum RcmsStatus rcms_class_list_new(uint32_t m, uint8_t d, struct RcmsClassList **out);

// # Safety
// `list` must be null or a live list.
uintptr_t rcms_class_list_len(const struct RcmsClassList *list);

// Copies class `index` into `entries` (`m * m` bytes, row-major) and
// reports its class size and multinomial factor.
//
// # Safety
// `list` must be live; `entries` must hold `m * m` bytes; the other
// out-pointers must be valid.
enum RcmsStatus rcms_class_list_get(const struct RcmsClassList *list,
                                    uintptr_t index,
                                    uint8_t *entries,
                                    uint64_t *orbit_size,
                                    uint64_t *mult_factor);

// # Safety
// `list` must be null or a live list, and is dead afterwards.
void rcms_class_list_free(struct RcmsClassList *list);

// All vacuum graphs of order `m` with their multiplicities, sorted
// connected first.
//
// # Safety
// `out` must be valid; the table is freed with `rcms_graph_table_free`.
enum RcmsStatus rcms_graph_table_new(uint32_t m, struct RcmsGraphTable **out);

// # Safety
// `table` must be null or a live table.
uintptr_t rcms_graph_table_len(const struct RcmsGraphTable *table);

// Copies the canonical adjacency of graph `index` (`m * m` bytes,
// diagonal = twice the loop count) into `out`.
//
// # Safety
// `table` must be live and `out` must hold `m * m` bytes.
enum RcmsStatus rcms_graph_table_adjacency(const struct RcmsGraphTable *table,
                                           uintptr_t index,
                                           uint8_t *out);

// `M_T` and `M_K` of graph `index` as decimal strings (freed with
// `rcms_string_free`), its symmetry factor and connectivity.
//
// # Safety
// `table` must be live; all out-pointers must be valid.
enum RcmsStatus rcms_graph_table_multiplicities(const struct RcmsGraphTable *table,
                                                uintptr_t index,
                                                char **m_total,
                                                char **m_kleinert,
                                                uint64_t *sym_factor,
                                                bool *connected);

// # Safety
// `table` must be null or a live table, and is dead afterwards.
void rcms_graph_table_free(struct RcmsGraphTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCMS_H */
