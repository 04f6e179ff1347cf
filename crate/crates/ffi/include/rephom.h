#ifndef REPHOM_H
#define REPHOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum RephomStatus {
  REPHOM_STATUS_OK = 0,
  // The computation ran and a checked identity failed.
  REPHOM_STATUS_MATH_FAILURE = 1,
  // Unknown space or group, malformed model, insufficient bounds.
  REPHOM_STATUS_INPUT_ERROR = 2,
  REPHOM_STATUS_NULL_POINTER = 3,
  REPHOM_STATUS_INVALID_UTF8 = 4,
  // An internal panic was caught at the boundary.
  REPHOM_STATUS_INTERNAL = 5,
} RephomStatus;

// A Lie algebra.
typedef struct RephomGroup RephomGroup;

// A JSON report with its verdict.
typedef struct RephomReport RephomReport;

// A catalog space or a parsed model.
typedef struct RephomSpace RephomSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *rephom_version(void);

// Message for the last failed call on this thread, or null. The caller
// owns the returned string.
char *rephom_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void rephom_string_free(char *s);

// Parses a catalog space such as `cp:2` or `sphere(3)`.
//
// # Safety
// `spec` must be a nul-terminated string; `out` must be writable.
enum RephomStatus rephom_space_parse(const char *spec, struct RephomSpace **out);

// Parses and validates a Quillen or Sullivan model given as JSON text.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum RephomStatus rephom_space_from_model_json(const char *json, struct RephomSpace **out);

// # Safety
// `space` must come from this library and not be freed twice.
void rephom_space_free(struct RephomSpace *space);

// Built-in Lie algebra by name (`sl2`, `torus(2)`, …) or a path to an algebra file.
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum RephomStatus rephom_group_new(const char *name, struct RephomGroup **out);

// Dimension of the algebra, or 0 for null.
//
// # Safety
// `group` must be null or come from this library.
size_t rephom_group_dim(const struct RephomGroup *group);

// # Safety
// `group` must come from this library and not be freed twice.
void rephom_group_free(struct RephomGroup *group);

// Representation homology through `max_degree`; with `invariants_only`
// nonzero only the `G`-invariant part.
//
// # Safety
// Handles must come from this library; `out` must be writable.
enum RephomStatus rephom_compute(const struct RephomSpace *space,
                                 const struct RephomGroup *group,
                                 int64_t max_degree,
                                 int32_t invariants_only,
                                 struct RephomReport **out);

// Freeness of the invariant part against the Hodge prediction. Returns
// [`RephomStatus::MathFailure`] with a report when the check fails.
//
// # Safety
// Handles must come from this library; `out` must be writable.
enum RephomStatus rephom_drinfeld_check(const struct RephomSpace *space,
                                        const struct RephomGroup *group,
                                        int64_t max_degree,
                                        struct RephomReport **out);

// The constant-term `q`-identity for a root system at level `r`.
//
// # Safety
// `type_rank` must be a nul-terminated string; `out` must be writable.
enum RephomStatus rephom_macdonald_q(const char *type_rank, uint32_t r, struct RephomReport **out);

// 1 if the report's checks passed, 0 otherwise or for null.
//
// # Safety
// `report` must be null or come from this library.
int32_t rephom_report_passed(const struct RephomReport *report);

// The report as pretty JSON; the caller owns the string. Null for null.
//
// # Safety
// `report` must be null or come from this library.
char *rephom_report_json(const struct RephomReport *report);

// # Safety
// `report` must come from this library and not be freed twice.
void rephom_report_free(struct RephomReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REPHOM_H */
