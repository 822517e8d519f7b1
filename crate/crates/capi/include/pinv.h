#ifndef PINV_H
#define PINV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible entry point.
 */
typedef enum PinvStatus {
  Ok = 0,
  /**
   * Verification ran and found a violated identity.
   */
  VerificationFailed = 1,
  /**
   * Bad arguments, bad JSON, or a degenerate input.
   */
  InvalidInput = 2,
  /**
   * Null pointer or invalid UTF-8 from the caller.
   */
  BadPointer = 3,
} PinvStatus;

/**
 * Opaque workspace: one block structure with its derived data.
 */
typedef struct PinvWorkspace PinvWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a workspace from `len` block sizes. Returns null on invalid input.
 *
 * # Safety
 * `sizes` must point to `len` readable u32 values.
 */
struct PinvWorkspace *pinv_workspace_new(const uint32_t *sizes, uintptr_t len);

/**
 * Release a workspace created by [`pinv_workspace_new`].
 *
 * # Safety
 * `ws` must be a pointer from [`pinv_workspace_new`], not yet freed.
 */
void pinv_workspace_free(struct PinvWorkspace *ws);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must originate from this library and not have been freed before.
 */
void pinv_string_free(char *s);

/**
 * Last error message of this workspace, or null. Owned by the workspace;
 * do not free.
 *
 * # Safety
 * `ws` must be a live workspace pointer.
 */
const char *pinv_last_error(const struct PinvWorkspace *ws);

/**
 * Matrix dimension n of the workspace's block structure.
 *
 * # Safety
 * `ws` must be a live workspace pointer.
 */
uint32_t pinv_dimension(const struct PinvWorkspace *ws);

/**
 * Generic orbit dimension: dim M minus the number of distinguished roots.
 *
 * # Safety
 * `ws` must be a live workspace pointer.
 */
int64_t pinv_orbit_dimension(const struct PinvWorkspace *ws);

/**
 * Marked diagram. `format` 0 = ASCII text, 1 = Unicode text, 2 = JSON.
 * The result is written to `*out` as a new string.
 *
 * # Safety
 * `ws` must be live and `out` writable.
 */
enum PinvStatus pinv_diagram(struct PinvWorkspace *ws, uint32_t format, char **out);

/**
 * Invariant families as a JSON array. `which` is one of
 * "base", "extended", "A", "B", "all".
 *
 * # Safety
 * `ws` must be live, `which` a NUL-terminated string, `out` writable.
 */
enum PinvStatus pinv_invariants(struct PinvWorkspace *ws, const char *which, char **out);

/**
 * Randomized exact invariance checks plus Jacobian independence.
 * A human-readable report is written to `*out` when non-null.
 *
 * # Safety
 * `ws` must be live; `out` may be null.
 */
enum PinvStatus pinv_check(struct PinvWorkspace *ws, uintptr_t trials, uint64_t seed, char **out);

/**
 * Reduce a Y-slice point (JSON, schema {"n", "entries"}) to its canonical
 * representative. Writes {"point", "transcript"} JSON to `*out`.
 *
 * # Safety
 * `ws` must be live, `point_json` a NUL-terminated string, `out` writable.
 */
enum PinvStatus pinv_canonicalize(struct PinvWorkspace *ws, const char *point_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINV_H */
