#ifndef CUTFORGE_H
#define CUTFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CF_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8, or an argument was out of range.
   */
  CF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed JSON, graph, group or cut input.
   */
  CF_STATUS_PARSE = 3,
  /**
   * A mathematical precondition or verification failed.
   */
  CF_STATUS_VERIFICATION = 4,
  /**
   * A size cap was exceeded or the ball radius was too small.
   */
  CF_STATUS_CAP = 5,
  CF_STATUS_UNSUPPORTED = 6,
  /**
   * A panic was caught at the boundary.
   */
  CF_STATUS_INTERNAL = 7,
} CfStatus;

/**
 * A finite multigraph.
 */
typedef struct CfGraph CfGraph;

/**
 * A finitely generated group with a fixed generating set.
 */
typedef struct CfGroup CfGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *cf_last_error_message(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cf_string_free(char *s);

/**
 * Parses a graph from `{"vertices": [...], "edges": [{"id", "src", "dst"}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_graph_from_json(const char *json, struct CfGraph **out);

/**
 * # Safety
 * `g` must come from `cf_graph_from_json` and not have been freed. Null is
 * ignored.
 */
void cf_graph_free(struct CfGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_graph_counts(const struct CfGraph *g, size_t *vertices, size_t *edges);

/**
 * Creates a group from a shorthand (`zd:2`, `free:3`, `fp:2,3`, `cyclic:6`)
 * or a JSON specification.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_group_new(const char *spec, struct CfGroup **out);

/**
 * # Safety
 * `g` must come from `cf_group_new` and not have been freed. Null is ignored.
 */
void cf_group_free(struct CfGroup *g);

/**
 * The Cayley ball of the given radius, as graph JSON.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_group_ball_json(const struct CfGroup *group, size_t radius, char **out);

/**
 * Measure series of the cut given as a JSON array of vertex ids, through
 * degree `l`. Coefficients are decimal strings.
 *
 * # Safety
 * `g` must be a live handle, `members_json` NUL-terminated, `out` writable.
 */
enum CfStatus cf_measure_json(const struct CfGraph *g,
                              const char *members_json,
                              size_t l,
                              char **out);

/**
 * Sieves the algebra generated by a JSON array of cuts (each an array of
 * vertex ids). `l = 0` selects the certified bound `4|V| + 1`.
 *
 * # Safety
 * `g` must be a live handle, `cuts_json` NUL-terminated, `out` writable.
 */
enum CfStatus cf_sieve_json(const struct CfGraph *g, const char *cuts_json, size_t l, char **out);

/**
 * Builds the structure tree of a nested family: `mode` is `'T'` or `'U'`.
 * The JSON carries vertices with labels, edges, and a `dot` rendering.
 *
 * # Safety
 * `g` must be a live handle, `cuts_json` NUL-terminated, `out` writable.
 */
enum CfStatus cf_tree_json(const struct CfGraph *g, const char *cuts_json, char mode, char **out);

/**
 * Infinite-component profile for radii `1..rmax`.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_ends_profile_json(const struct CfGroup *group, size_t rmax, char **out);

/**
 * Splitting pipeline on the ball of radius `radius` with the balanced cut,
 * word bound `words` and truncation degree `l`.
 *
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_split_json(const struct CfGroup *group,
                            size_t radius,
                            size_t words,
                            size_t l,
                            char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUTFORGE_H */
