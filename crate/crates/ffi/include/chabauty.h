#ifndef CHABAUTY_H
#define CHABAUTY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChabautyStatus {
  CHABAUTY_STATUS_OK = 0,
  CHABAUTY_STATUS_NULL_ARGUMENT = 1,
  CHABAUTY_STATUS_INVALID_UTF8 = 2,
  CHABAUTY_STATUS_PANIC = 3,
  CHABAUTY_STATUS_RANK_TOO_LOW = 10,
  CHABAUTY_STATUS_MALFORMED_FAMILY = 11,
  CHABAUTY_STATUS_INVALID_SHEET = 12,
  CHABAUTY_STATUS_INVALID_POSITION = 13,
  CHABAUTY_STATUS_NON_RATIONAL_INPUT = 14,
  CHABAUTY_STATUS_INCONSISTENT_DESCRIPTOR = 15,
  CHABAUTY_STATUS_MISMATCHED_AMBIENT = 16,
  CHABAUTY_STATUS_EVEN_PRIME = 17,
  CHABAUTY_STATUS_INSUFFICIENT_PRECISION = 18,
  CHABAUTY_STATUS_RESOLUTION_TOO_COARSE = 19,
  CHABAUTY_STATUS_FINITE_INPUT = 20,
  CHABAUTY_STATUS_CONSTRAINT_ERROR = 21,
  CHABAUTY_STATUS_SCHEMA_ERROR = 22,
  CHABAUTY_STATUS_LEVEL_CAP = 23,
  CHABAUTY_STATUS_IO_ERROR = 24,
} ChabautyStatus;

/**
 * Output of one command: the JSON text and the CLI exit status.
 */
typedef struct ChabautyResult ChabautyResult;

/**
 * Options shared by the commands run through it.
 */
typedef struct ChabautySession ChabautySession;

/**
 * A parsed closed subgroup of `G_{p,k}`.
 */
typedef struct ChabautySubgroup ChabautySubgroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *chabauty_last_error(void);

/**
 * Static name of a status code, e.g. `"SCHEMA_ERROR"`.
 */
const char *chabauty_status_name(enum ChabautyStatus status);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void chabauty_string_free(char *s);

struct ChabautySession *chabauty_session_new(void);

/**
 * # Safety
 * `s` must come from [`chabauty_session_new`] and not have been freed.
 */
void chabauty_session_free(struct ChabautySession *s);

/**
 * Window level; a negative value unsets it.
 *
 * # Safety
 * `s` must be a live session.
 */
enum ChabautyStatus chabauty_session_set_level(struct ChabautySession *s, int32_t level);

/**
 * # Safety
 * `s` must be a live session.
 */
enum ChabautyStatus chabauty_session_set_max_level(struct ChabautySession *s, uint32_t cap);

/**
 * # Safety
 * `s` must be a live session.
 */
enum ChabautyStatus chabauty_session_set_canon(struct ChabautySession *s, bool canon);

/**
 * Item count for `enum` and `approx`; zero unsets it.
 *
 * # Safety
 * `s` must be a live session.
 */
enum ChabautyStatus chabauty_session_set_count(struct ChabautySession *s, size_t count);

/**
 * Tolerance for `certify` as `"num/den"`; NULL unsets it.
 *
 * # Safety
 * `s` must be a live session and `eps` NULL or a C string.
 */
enum ChabautyStatus chabauty_session_set_epsilon(struct ChabautySession *s, const char *eps);

/**
 * Runs a command (`"canon"`, `"dist"`, `"limit"`, ...) on a JSON
 * document. Command-level failures are reported inside the result, as
 * the CLI does; the status only covers bad arguments.
 *
 * # Safety
 * `s` must be a live session, `command` and `input` C strings, and `out`
 * writable.
 */
enum ChabautyStatus chabauty_session_run(const struct ChabautySession *s,
                                         const char *command,
                                         const char *input,
                                         struct ChabautyResult **out);

/**
 * JSON text of a result; valid until the result is freed.
 *
 * # Safety
 * `r` must be a live result.
 */
const char *chabauty_result_json(const struct ChabautyResult *r);

/**
 * Exit status the CLI would report: 0, 1 (domain) or 2 (schema/usage).
 *
 * # Safety
 * `r` must be a live result.
 */
int chabauty_result_exit_code(const struct ChabautyResult *r);

/**
 * # Safety
 * `r` must come from [`chabauty_session_run`] and not have been freed.
 */
void chabauty_result_free(struct ChabautyResult *r);

/**
 * Parses a Gpk subgroup document.
 *
 * # Safety
 * `doc` must be a C string and `out` writable.
 */
enum ChabautyStatus chabauty_subgroup_parse(const char *doc, struct ChabautySubgroup **out);

/**
 * # Safety
 * `h` must come from [`chabauty_subgroup_parse`] and not have been freed.
 */
void chabauty_subgroup_free(struct ChabautySubgroup *h);

/**
 * Canonical descriptor as a JSON document.
 *
 * # Safety
 * `h` must be a live subgroup and `out` writable.
 */
enum ChabautyStatus chabauty_subgroup_canon(const struct ChabautySubgroup *h, char **out);

/**
 * Membership of an element given as `["w", "c", "z"]`.
 *
 * # Safety
 * `h` must be a live subgroup, `element` a C string and `out` writable.
 */
enum ChabautyStatus chabauty_subgroup_member(const struct ChabautySubgroup *h,
                                             const char *element,
                                             bool *out);

/**
 * Chabauty distance truncated at `level`, as an exact `"num/den"` string.
 *
 * # Safety
 * `a` and `b` must be live subgroups and `out` writable.
 */
enum ChabautyStatus chabauty_subgroup_distance(const struct ChabautySubgroup *a,
                                               const struct ChabautySubgroup *b,
                                               uint32_t level,
                                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHABAUTY_H */
