#ifndef COVARRAY_H
#define COVARRAY_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of a call.
typedef enum CaStatus {
  CA_STATUS_OK = 0,
  CA_STATUS_NULL_POINTER = 1,
  CA_STATUS_INVALID_UTF8 = 2,
  CA_STATUS_PARSE = 3,
  CA_STATUS_INVALID_ARGUMENT = 4,
  CA_STATUS_BUDGET_EXCEEDED = 5,
  CA_STATUS_INTERNAL = 6,
  CA_STATUS_PANIC = 7,
} CaStatus;

// Opaque covering array handle.
typedef struct CaArray CaArray;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// The pointer stays valid until the next call on the same thread.
const char *ca_last_error(void);

// Parses the `.ca` text format. Any rejected text gives `CA_STATUS_PARSE`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a writable pointer.
enum CaStatus ca_parse(const char *src, struct CaArray **out);

// Builds an `m x n` array over `q` symbols from `m * n` row-major entries.
//
// # Safety
// `entries` must point to `m * n` readable bytes and `out` be writable.
enum CaStatus ca_new(size_t m, size_t n, uint8_t q, const uint8_t *entries, struct CaArray **out);

// Releases a handle; null is ignored.
//
// # Safety
// `array` must be null or a handle from this library not yet freed.
void ca_free(struct CaArray *array);

// Writes the dimensions of `array`.
//
// # Safety
// `array` must be a live handle; the output pointers must be writable.
enum CaStatus ca_dims(const struct CaArray *array, size_t *m, size_t *n, uint8_t *q);

// The `.ca` text of `array`, or null on failure. Free with
// `ca_string_free`.
//
// # Safety
// `array` must be a live handle.
char *ca_to_text(const struct CaArray *array);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void ca_string_free(char *s);

// Sets `*covering` to whether `array` has strength `t`.
//
// # Safety
// `array` must be a live handle and `covering` writable.
enum CaStatus ca_verify(const struct CaArray *array, size_t t, bool *covering);

// The canonical representative of the class of `array`.
//
// # Safety
// `array` must be a live handle and `out` writable.
enum CaStatus ca_canonical(const struct CaArray *array, struct CaArray **out);

// Sets `*equivalent` to whether the two arrays are equivalent.
//
// # Safety
// Both handles must be live and `equivalent` writable.
enum CaStatus ca_equivalent(const struct CaArray *a, const struct CaArray *b, bool *equivalent);

// Builds a named construction. `param` is the size for
// `"standard-maximal"`, the degree for `"johnson-entringer"`, and ignored
// otherwise. Other names: `"hadamard-12x11"`, `"witness-24x12"`, and the
// fixed matrices `"A"`, `"B1"`, `"B2"`, `"D"`, `"E"`, `"CA5x4"`, `"CA10x5"`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` writable.
enum CaStatus ca_construct(const char *name, size_t param, struct CaArray **out);

// Number of equivalence classes of `m x n` binary arrays of strength `t`.
//
// # Safety
// `count` must be writable.
enum CaStatus ca_count_classes(size_t m, size_t t, size_t n, size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVARRAY_H */
