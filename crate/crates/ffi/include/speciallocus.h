#ifndef SPECIALLOCUS_H
#define SPECIALLOCUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_UTF8 = 2,
  SL_STATUS_INVALID_INPUT = 3,
  SL_STATUS_DOMAIN = 4,
  SL_STATUS_RESOURCE = 5,
  SL_STATUS_OUT_OF_RANGE = 6,
  SL_STATUS_PANIC = 7,
} SlStatus;

// The class group of the order of discriminant D.
typedef struct SlClassGroup SlClassGroup;

// The group SL₂(ℤ/N)/{±1}, enumerated.
typedef struct SlGroup SlGroup;

// A classical modular polynomial Φ_m.
typedef struct SlModPoly SlModPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *sl_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer obtained from this library, freed once.
void sl_string_free(char *s);

// Builds the class group for a decimal discriminant.
//
// # Safety
// `disc` must be a NUL-terminated string; `out` must be writable.
enum SlStatus sl_classgroup_new(const char *disc, struct SlClassGroup **out);

// # Safety
// `g` must be a live handle and `h` writable.
enum SlStatus sl_classgroup_order(const struct SlClassGroup *g, uint64_t *h);

// The reduced form of class `index` as three decimal strings.
//
// # Safety
// `g` must be a live handle and `a`, `b`, `c` writable.
enum SlStatus sl_classgroup_form(const struct SlClassGroup *g,
                                 uintptr_t index,
                                 char **a,
                                 char **b,
                                 char **c);

// # Safety
// `g` must be NULL or a handle from `sl_classgroup_new`, freed once.
void sl_classgroup_free(struct SlClassGroup *g);

// Whether the prime l splits in the order of discriminant D (1 or 0).
//
// # Safety
// `disc` must be a NUL-terminated string; `out` must be writable.
enum SlStatus sl_is_split(uint64_t l, const char *disc, int32_t *out);

// Builds Φ_m for 1 ≤ m ≤ 20.
//
// # Safety
// `out` must be writable.
enum SlStatus sl_modpoly_new(uint64_t m, struct SlModPoly **out);

// Degree of Φ_m in each variable.
//
// # Safety
// `p` must be a live handle and `deg` writable.
enum SlStatus sl_modpoly_degree(const struct SlModPoly *p, uint64_t *deg);

// Coefficient of x^i y^j as a decimal string.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum SlStatus sl_modpoly_coeff(const struct SlModPoly *p, uintptr_t i, uintptr_t j, char **out);

// # Safety
// `p` must be NULL or a handle from `sl_modpoly_new`, freed once.
void sl_modpoly_free(struct SlModPoly *p);

// Enumerates the group when its order is at most `budget`.
//
// # Safety
// `out` must be writable.
enum SlStatus sl_group_new(uint64_t n, uint64_t budget, struct SlGroup **out);

// # Safety
// `g` must be a live handle and `order` writable.
enum SlStatus sl_group_order(const struct SlGroup *g, uint64_t *order);

// # Safety
// `g` must be NULL or a handle from `sl_group_new`, freed once.
void sl_group_free(struct SlGroup *g);

// Least index of a proper subgroup up to `cap`. Writes 0 to both outputs
// when there is none.
//
// # Safety
// `index` and `witness_order` must be writable.
enum SlStatus sl_group_min_index(uint64_t n,
                                 uint64_t cap,
                                 uint64_t budget,
                                 uint64_t *index,
                                 uint64_t *witness_order);

// Runs a CLI command (argv without the program name) and returns its
// output, error text and exit status.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `out`, `err` and
// `exit_code` must be writable.
enum SlStatus sl_run(const char *const *argv,
                     uintptr_t argc,
                     char **out,
                     char **err,
                     int32_t *exit_code);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPECIALLOCUS_H */
