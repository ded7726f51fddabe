#ifndef RESLOGIC_H
#define RESLOGIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_POINTER = 1,
  RL_STATUS_INVALID_UTF8 = 2,
  RL_STATUS_SYNTAX = 3,
  RL_STATUS_ARITY = 4,
  RL_STATUS_UNKNOWN_DEFINITION = 5,
  RL_STATUS_MALFORMED_DEFINITION = 6,
  RL_STATUS_NOT_CLOSED = 7,
  RL_STATUS_HORIZON = 8,
  RL_STATUS_SUBSTITUTION = 9,
  RL_STATUS_ILLEGAL_MOVE = 10,
  RL_STATUS_WORLD = 11,
  RL_STATUS_SCRIPT = 12,
  RL_STATUS_TOO_MANY_LETTERS = 13,
  RL_STATUS_NOT_ACCEPTING = 14,
  RL_STATUS_OTHER = 15,
  RL_STATUS_PANIC = 16,
} RlStatus;

/**
 * A parsed, closed process.
 */
typedef struct RlProcess RlProcess;

/**
 * A play in progress: the caller moves as master, a slave strategy answers.
 */
typedef struct RlSession RlSession;

/**
 * A parsed world: a step function from time to situations.
 */
typedef struct RlWorld RlWorld;

/**
 * Evaluation limits. Pass a null pointer to use the defaults (horizon 32, probe depth 3,
 * constants 0..=31).
 */
typedef struct RlConfig {
  uint64_t horizon;
  size_t probe_depth;
  uint32_t domain_max;
} RlConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *rl_version(void);

/**
 * Message for the last failed call on this thread; empty after a success. Valid until
 * the next call on the same thread.
 */
const char *rl_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void rl_string_free(char *s);

/**
 * Default evaluation limits.
 */
struct RlConfig rl_config_default(void);

/**
 * Parse a world file (lines of `@t: atoms`).
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RlStatus rl_world_parse(const char *src, struct RlWorld **out);

/**
 * # Safety
 * `w` must come from [`rl_world_parse`], or be null.
 */
void rl_world_free(struct RlWorld *w);

/**
 * Parse a process document; the last item must be a process.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RlStatus rl_process_parse(const char *src, struct RlProcess **out);

/**
 * # Safety
 * `p` must come from [`rl_process_parse`], or be null.
 */
void rl_process_free(struct RlProcess *p);

/**
 * Canonical text of a process. Free the result with [`rl_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum RlStatus rl_process_to_string(const struct RlProcess *p, char **out);

/**
 * Truth of a process on `(lo, hi)`, or on `(lo, inf)` when `hi_infinite` is set. A
 * domain declared by the world file overrides the one in `cfg`.
 *
 * # Safety
 * Handles must be live, `cfg` valid or null, `out_truth` valid.
 */
enum RlStatus rl_process_eval(const struct RlProcess *p,
                              const struct RlWorld *w,
                              uint64_t lo,
                              uint64_t hi,
                              bool hi_infinite,
                              const struct RlConfig *cfg,
                              bool *out_truth);

/**
 * Search small worlds for a counterexample. `out_valid` is false when one was found;
 * `out_report` (optional) receives a description. Finding none is evidence, not proof.
 *
 * # Safety
 * `p` must be live, `cfg` valid or null, `out_valid` valid, `out_report` valid or null.
 */
enum RlStatus rl_process_check_validity(const struct RlProcess *p,
                                        const struct RlConfig *cfg,
                                        size_t trials,
                                        uint64_t seed,
                                        bool *out_valid,
                                        char **out_report);

/**
 * Decide whether an MLL formula is a binary tautology. When it is, `out_strategy`
 * (optional) receives a slave spec such as `pairing:c~a.l`; otherwise it is set to null.
 *
 * # Safety
 * `src` must be a NUL-terminated string, `out_tautology` valid, `out_strategy` valid or null.
 */
enum RlStatus rl_mll_decide(const char *src, bool *out_tautology, char **out_strategy);

/**
 * Start a play of `resource` against the slave strategy `slave` (`waiting`,
 * `diverging`, `pairing:P~Q,...`, `script:...`, optionally prefixed by `delay=N/`).
 *
 * # Safety
 * Strings must be NUL-terminated, `cfg` valid or null, `out` valid.
 */
enum RlStatus rl_session_new(const char *resource,
                             const char *slave,
                             const struct RlConfig *cfg,
                             struct RlSession **out);

/**
 * One input line, as in the interactive player: `path -> branch(args)`, an empty line
 * to let a tick pass, `:show`, `:play`, `:star`, `:eval <file>`, `:quit`. A rejected
 * line leaves the session unchanged. `out_finished` (optional) is set after `:quit`.
 *
 * # Safety
 * `s` must be live, `line` NUL-terminated, `out_reply` valid, `out_finished` valid or null.
 */
enum RlStatus rl_session_send(struct RlSession *s,
                              const char *line,
                              char **out_reply,
                              bool *out_finished);

/**
 * # Safety
 * `s` must come from [`rl_session_new`], or be null.
 */
void rl_session_free(struct RlSession *s);

/**
 * Run a bundled demo (`assembly-process`, `assembly-resource:theta`,
 * `assembly-resource:lambda`). `out_ok` tells whether every check held.
 *
 * # Safety
 * `name` must be NUL-terminated, `out_ok` valid, `out_report` valid or null.
 */
enum RlStatus rl_demo_run(const char *name, bool *out_ok, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESLOGIC_H */
