#ifndef COAMOEBA_H
#define COAMOEBA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoamoebaCategoryKind {
  COAMOEBA_CATEGORY_KIND_EXTERIOR = 0,
  COAMOEBA_CATEGORY_KIND_COAMOEBA = 1,
  /**
   * Delta objects on the window `0..=2n+1`.
   */
  COAMOEBA_CATEGORY_KIND_DELTA = 2,
} CoamoebaCategoryKind;

typedef enum CoamoebaMeshFormat {
  COAMOEBA_MESH_FORMAT_OFF = 0,
  COAMOEBA_MESH_FORMAT_OBJ = 1,
  COAMOEBA_MESH_FORMAT_JSON = 2,
} CoamoebaMeshFormat;

typedef enum CoamoebaStatus {
  COAMOEBA_STATUS_OK = 0,
  COAMOEBA_STATUS_NULL_POINTER = 1,
  COAMOEBA_STATUS_INVALID_ARGUMENT = 2,
  COAMOEBA_STATUS_UNSUPPORTED_DIMENSION = 3,
  COAMOEBA_STATUS_NOT_FINITE_INDEX = 4,
  COAMOEBA_STATUS_INTERNAL = 5,
} CoamoebaStatus;

/**
 * Opaque category handle.
 */
typedef struct CoamoebaCategory CoamoebaCategory;

/**
 * Opaque verification report handle.
 */
typedef struct CoamoebaReport CoamoebaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a
 * successful call. Valid until the next call into the library.
 */
const char *coamoeba_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void coamoeba_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum CoamoebaStatus coamoeba_category_build(enum CoamoebaCategoryKind kind,
                                            size_t n,
                                            struct CoamoebaCategory **out);

/**
 * Quotient category for the sublattice spanned by `count` vectors of
 * length `n`, stored row by row in `basis`.
 *
 * # Safety
 * `basis` must point to `count * n` integers and `out` to writable storage.
 */
enum CoamoebaStatus coamoeba_quotient(size_t n,
                                      const int64_t *basis,
                                      size_t count,
                                      struct CoamoebaCategory **out);

/**
 * # Safety
 * `cat` must be a live handle or null.
 */
size_t coamoeba_category_object_count(const struct CoamoebaCategory *cat);

/**
 * Dimension of `hom(src, tgt)`; 0 for out-of-range indices.
 *
 * # Safety
 * `cat` must be a live handle or null.
 */
size_t coamoeba_category_hom_dim(const struct CoamoebaCategory *cat, size_t src, size_t tgt);

/**
 * # Safety
 * `cat` must be a live handle; `out` must be writable.
 */
enum CoamoebaStatus coamoeba_category_to_json(const struct CoamoebaCategory *cat, char **out);

/**
 * Counts violations of the A-infinity relations up to `max_arity`.
 *
 * # Safety
 * `cat` must be a live handle; `violations` must be writable.
 */
enum CoamoebaStatus coamoeba_category_check(const struct CoamoebaCategory *cat,
                                            size_t max_arity,
                                            size_t *violations);

/**
 * # Safety
 * `cat` must come from this library or be null; it is invalid afterwards.
 */
void coamoeba_category_free(struct CoamoebaCategory *cat);

/**
 * Runs the comparison pipeline for one `n`. A mismatch is not an error:
 * inspect the report with [`coamoeba_report_passed`].
 *
 * # Safety
 * `out` must be writable.
 */
enum CoamoebaStatus coamoeba_verify(size_t n, struct CoamoebaReport **out);

/**
 * # Safety
 * `report` must be a live handle or null.
 */
bool coamoeba_report_passed(const struct CoamoebaReport *report);

/**
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum CoamoebaStatus coamoeba_report_json(const struct CoamoebaReport *report, char **out);

/**
 * # Safety
 * `report` must come from this library or be null.
 */
void coamoeba_report_free(struct CoamoebaReport *report);

/**
 * Mesh or face-lattice export of the torus tessellation.
 *
 * # Safety
 * `out` must be writable.
 */
enum CoamoebaStatus coamoeba_tessellation_export(size_t n,
                                                 enum CoamoebaMeshFormat format,
                                                 bool cover_patch,
                                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COAMOEBA_H */
