#ifndef PROPDEL_H
#define PROPDEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success; everything else is an error.
 */
typedef enum PidStatus {
  PID_STATUS_OK = 0,
  PID_STATUS_NULL_POINTER = 1,
  PID_STATUS_INVALID_UTF8 = 2,
  PID_STATUS_PARSE_ERROR = 3,
  PID_STATUS_INVALID_INPUT = 4,
  PID_STATUS_UNSUPPORTED = 5,
  PID_STATUS_PANIC = 6,
} PidStatus;

/**
 * An owned preference profile with an optional budget from its `k` line.
 */
typedef struct PidProfile PidProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance in the `pid 1` text format.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is valid for writes. On success
 * `*out` receives a handle to release with [`pid_profile_free`].
 */
enum PidStatus pid_profile_parse(const char *text, struct PidProfile **out);

/**
 * Releases a profile. Null is ignored.
 *
 * # Safety
 * `profile` is null or a handle from [`pid_profile_parse`] not yet freed.
 */
void pid_profile_free(struct PidProfile *profile);

/**
 * Number of agents, or 0 for a null handle.
 *
 * # Safety
 * `profile` is null or a live handle.
 */
size_t pid_profile_agents(const struct PidProfile *profile);

/**
 * Number of items, or 0 for a null handle.
 *
 * # Safety
 * `profile` is null or a live handle.
 */
size_t pid_profile_items(const struct PidProfile *profile);

/**
 * Decides whether a proportional allocation exists.
 *
 * `*proportional` receives the answer. If `out_json` is not null it receives
 * the result document with either an allocation or an obstruction
 * certificate.
 *
 * # Safety
 * `profile` is a live handle, `proportional` is valid for writes and
 * `out_json` is null or valid for writes.
 */
enum PidStatus pid_check(const struct PidProfile *profile, bool *proportional, char **out_json);

/**
 * Minimum deletion for three agents with the memoized polynomial solver.
 *
 * A negative `k` falls back to the instance's `k` line, if any. With a
 * budget the document carries the decision `min_size <= k`. `memoize`
 * toggles reuse of equivalent calls.
 *
 * # Safety
 * `profile` is a live handle, `min_size` is valid for writes and `out_json`
 * is null or valid for writes.
 */
enum PidStatus pid_solve_three(const struct PidProfile *profile,
                               int64_t k,
                               bool memoize,
                               size_t *min_size,
                               char **out_json);

/**
 * Minimum deletion by exhaustive enumeration, for any number of agents and
 * at most 20 items.
 *
 * # Safety
 * As for [`pid_solve_three`].
 */
enum PidStatus pid_solve_exhaustive(const struct PidProfile *profile,
                                    size_t *min_size,
                                    char **out_json);

/**
 * Whether deleting `items[0..len]` allows a proportional allocation.
 *
 * # Safety
 * `profile` is a live handle, `items` points to `len` readable values (or is
 * null with `len == 0`) and `valid` is valid for writes.
 */
enum PidStatus pid_verify(const struct PidProfile *profile,
                          const uint32_t *items,
                          size_t len,
                          bool *valid);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *pid_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void pid_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROPDEL_H */
