/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef PETRI_HOMOLOGY_H
#define PETRI_HOMOLOGY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PhEndpoint {
  PH_ENDPOINT_INITIAL = 0,
  PH_ENDPOINT_FINAL = 1,
} PhEndpoint;

typedef enum PhMode {
  PH_MODE_REACHABLE = 0,
  PH_MODE_ALL_STATES = 1,
} PhMode;

typedef enum PhStatus {
  PH_STATUS_OK = 0,
  PH_STATUS_NULL_POINTER = 1,
  PH_STATUS_INVALID_UTF8 = 2,
  PH_STATUS_PARSE = 3,
  PH_STATUS_RESOURCE_CAP = 4,
  PH_STATUS_INVALID_ARGUMENT = 5,
  PH_STATUS_OUT_OF_RANGE = 6,
  PH_STATUS_OVERFLOW = 7,
  PH_STATUS_CHECK_FAILED = 8,
  PH_STATUS_INTERNAL = 9,
} PhStatus;

typedef enum PhVariant {
  PH_VARIANT_P = 0,
  PH_VARIANT_N = 1,
  PH_VARIANT_N_PRIME = 2,
} PhVariant;

typedef struct PhHomology PhHomology;

typedef struct PhNet PhNet;

typedef struct PhStateSpace PhStateSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string.
 * Valid until the next `ph_*` call on the same thread.
 */
const char *ph_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, freed once.
 */
void ph_string_free(char *s);

/**
 * Parses a net document.
 *
 * # Safety
 * `document` must be a NUL-terminated string, `out` a valid pointer.
 */
enum PhStatus ph_net_parse(const char *document, struct PhNet **out_net);

/**
 * Builds the pipeline net `P_n`, `N_n` or `N'_n`.
 *
 * # Safety
 * `out_net` must be a valid pointer.
 */
enum PhStatus ph_net_pipeline(size_t n, enum PhVariant variant, struct PhNet **out_net);

/**
 * Writes `net` in the document format accepted by `ph_net_parse`.
 *
 * # Safety
 * `net` must be a live handle and `out_text` a valid pointer.
 */
enum PhStatus ph_net_emit(const struct PhNet *net, char **out_text);

/**
 * # Safety
 * `net` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_net_place_count(const struct PhNet *net, size_t *out_count);

/**
 * # Safety
 * `net` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_net_event_count(const struct PhNet *net, size_t *out_count);

/**
 * # Safety
 * `net` must be null or a handle not yet freed.
 */
void ph_net_free(struct PhNet *net);

/**
 * Explores the state space of `net`, failing with `RESOURCE_CAP` past
 * `max_states` states. The space keeps its own reference to the net.
 *
 * # Safety
 * `net` must be a live handle and `out_space` a valid pointer.
 */
enum PhStatus ph_state_space_explore(const struct PhNet *net,
                                     enum PhMode mode,
                                     size_t max_states,
                                     struct PhStateSpace **out_space);

/**
 * # Safety
 * `space` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_state_space_count(const struct PhStateSpace *space, size_t *out_count);

/**
 * # Safety
 * `space` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_state_space_deadlock_count(const struct PhStateSpace *space, size_t *out_count);

/**
 * # Safety
 * `space` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_state_space_sender_count(const struct PhStateSpace *space, size_t *out_count);

/**
 * # Safety
 * `space` must be null or a handle not yet freed.
 */
void ph_state_space_free(struct PhStateSpace *space);

/**
 * Integral homology of the cube complex of `space`.
 *
 * # Safety
 * `space` must be a live handle and `out_homology` a valid pointer.
 */
enum PhStatus ph_homology_ordinary(const struct PhStateSpace *space,
                                   struct PhHomology **out_homology);

/**
 * Directed homology for the initial or final endpoint.
 *
 * # Safety
 * `space` must be a live handle and `out_homology` a valid pointer.
 */
enum PhStatus ph_homology_directed(const struct PhStateSpace *space,
                                   enum PhEndpoint endpoint,
                                   struct PhHomology **out_homology);

/**
 * Number of computed degrees. Groups beyond it are zero.
 *
 * # Safety
 * `h` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_homology_degree_count(const struct PhHomology *h, size_t *out_count);

/**
 * Free rank of `H_degree`.
 *
 * # Safety
 * `h` must be a live handle and `out_betti` a valid pointer.
 */
enum PhStatus ph_homology_betti(const struct PhHomology *h, size_t degree, size_t *out_betti);

/**
 * Number of torsion coefficients of `H_degree`.
 *
 * # Safety
 * `h` must be a live handle and `out_count` a valid pointer.
 */
enum PhStatus ph_homology_torsion_count(const struct PhHomology *h,
                                        size_t degree,
                                        size_t *out_count);

/**
 * The `index`-th torsion coefficient of `H_degree`; `OVERFLOW` if it does
 * not fit in 64 bits.
 *
 * # Safety
 * `h` must be a live handle and `out_value` a valid pointer.
 */
enum PhStatus ph_homology_torsion(const struct PhHomology *h,
                                  size_t degree,
                                  size_t index,
                                  uint64_t *out_value);

/**
 * Renders the groups as `H_0 = Z, H_1 = Z ⊕ Z/2, ...` (UTF-8).
 *
 * # Safety
 * `h` must be a live handle and `out_text` a valid pointer.
 */
enum PhStatus ph_homology_render(const struct PhHomology *h, char **out_text);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void ph_homology_free(struct PhHomology *h);

/**
 * Runs the pipeline checks for `n = 2..=n_max`. Returns `CHECK_FAILED` if
 * any check fails; `out_failed` (may be null) receives the failure count.
 *
 * # Safety
 * `out_failed` must be null or a valid pointer.
 */
enum PhStatus ph_verify_theorems(size_t n_max, size_t max_states, size_t *out_failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PETRI_HOMOLOGY_H */
