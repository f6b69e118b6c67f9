#ifndef CONIC_RIGIDITY_H
#define CONIC_RIGIDITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_INVALID_INPUT = 2,
  CR_STATUS_GEOMETRY = 3,
  CR_STATUS_DYNAMICS = 4,
  // Computation finished but differs from the reference.
  CR_STATUS_MISMATCH = 5,
  CR_STATUS_BUFFER_TOO_SMALL = 6,
  CR_STATUS_INTERNAL = 7,
} CrStatus;

// Opaque circle-map handle.
typedef struct CrMap CrMap;

// Opaque curve handle.
typedef struct CrOval CrOval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next library call on the same thread.
const char *cr_last_error(void);

// Library version as a static NUL-terminated string.
const char *cr_version(void);

// Releases a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cr_string_free(char *s);

// Builds a curve from a JSON spec such as
// `{"variant": "ellipse", "A": 2, "B": 1}`.
//
// # Safety
// `spec_json` must be a valid NUL-terminated string and `out` writable.
enum CrStatus cr_oval_from_json(const char *spec_json, struct CrOval **out);

// # Safety
// `oval` must be NULL or a live handle from `cr_oval_from_json`.
void cr_oval_free(struct CrOval *oval);

// Point `gamma(t)`.
//
// # Safety
// `oval` must be a live handle; `x` and `y` writable.
enum CrStatus cr_oval_point(const struct CrOval *oval, double t, double *x, double *y);

// `f_P o f_Q` for pencils through `P = (px, py)` and `Q = (qx, qy)`.
//
// # Safety
// `oval` must be a live handle and `out` writable.
enum CrStatus cr_map_pencil_pair(const struct CrOval *oval,
                                 double px,
                                 double py,
                                 double qx,
                                 double qy,
                                 struct CrMap **out);

// `f_u o f_v` for parallel chords at direction angles `angle_u`, `angle_v`.
//
// # Safety
// `oval` must be a live handle and `out` writable.
enum CrStatus cr_map_direction_pair(const struct CrOval *oval,
                                    double angle_u,
                                    double angle_v,
                                    struct CrMap **out);

// # Safety
// `map` must be NULL or a live map handle.
void cr_map_free(struct CrMap *map);

// # Safety
// `map` must be a live handle and `out` writable.
enum CrStatus cr_map_eval(const struct CrMap *map, double t, double *out);

// Rotation number from `iterations` steps starting at `x0`, with its
// error bound.
//
// # Safety
// `map` must be a live handle; `value` and `error_bound` writable.
enum CrStatus cr_rotation_number(const struct CrMap *map,
                                 double x0,
                                 uintptr_t iterations,
                                 double *value,
                                 double *error_bound);

// Fixed parameters of the map. `*count` receives the number found; when
// it exceeds `capacity` nothing is written to `buffer` and
// `CR_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `map` must be a live handle, `count` writable and `buffer` valid for
// `capacity` doubles.
enum CrStatus cr_fixed_points(const struct CrMap *map,
                              double *buffer,
                              uintptr_t capacity,
                              uintptr_t *count);

// `|F'(x1) F'(x2) - 1|` at the two fixed points of an orientation
// preserving map.
//
// # Safety
// `map` must be a live handle and `defect` writable.
enum CrStatus cr_mobius_reciprocity(const struct CrMap *map, double *defect);

// Solves the series expansion for `k_sign` = +1 or -1 and writes its
// canonical text to `*text` (free with `cr_string_free`). Returns
// `CR_STATUS_MISMATCH` when the result differs from the golden file; the
// text is still written.
//
// # Safety
// `text` must be writable.
enum CrStatus cr_verify_series(int32_t k_sign, char **text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONIC_RIGIDITY_H */
