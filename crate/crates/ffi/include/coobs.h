#ifndef COOBS_H
#define COOBS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoobsStatus {
  COOBS_STATUS_OK = 0,
  // A required pointer argument was null.
  COOBS_STATUS_NULL_ARGUMENT = 1,
  COOBS_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or unsupported format version.
  COOBS_STATUS_PARSE = 3,
  // Well-formed input that violates a precondition (unknown event,
  // agent, property or algorithm; spec outside the plant; ...).
  COOBS_STATUS_INVALID_INPUT = 4,
  // Local supervisor extraction on a result that is not relatively
  // coobservable.
  COOBS_STATUS_CONFLICT = 5,
  COOBS_STATUS_NO_CONVERGENCE = 6,
  // Internal panic; the message carries the payload.
  COOBS_STATUS_PANIC = 7,
} CoobsStatus;

// Opaque handle for a plant together with its agents.
typedef struct CoobsContext CoobsContext;

// Opaque generator handle.
typedef struct CoobsGenerator CoobsGenerator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a
// successful call. Valid until the next call on the same thread.
const char *coobs_last_error_message(void);

// # Safety
// `s` is null or was returned by this library and not yet freed.
void coobs_string_free(char *s);

// Parses an automaton file.
//
// # Safety
// `json` is a nul-terminated string; `out` is writable.
enum CoobsStatus coobs_generator_from_json(const char *json, struct CoobsGenerator **out);

// # Safety
// `g` is a live handle; `out` is writable.
enum CoobsStatus coobs_generator_to_json(const struct CoobsGenerator *g, char **out);

// Number of states; 0 for a null handle.
//
// # Safety
// `g` is null or a live handle.
size_t coobs_generator_num_states(const struct CoobsGenerator *g);

// # Safety
// `g` is null or a live handle.
size_t coobs_generator_num_transitions(const struct CoobsGenerator *g);

// # Safety
// `g` is null or a handle from this library that is not used afterwards.
void coobs_generator_free(struct CoobsGenerator *g);

// Builds a context from a plant and an agents file. The plant is copied.
//
// # Safety
// `plant` is a live handle; `agents_json` is a nul-terminated string;
// `out` is writable.
enum CoobsStatus coobs_context_new(const struct CoobsGenerator *plant,
                                   const char *agents_json,
                                   struct CoobsContext **out);

// # Safety
// `ctx` is null or a handle from this library that is not used afterwards.
void coobs_context_free(struct CoobsContext *ctx);

// Decides `property` (as named by `coobs check`) for `spec`. `ambient` may
// be null. On success `*holds` is set; when `report_json` is non-null it
// receives the check report, witness included.
//
// # Safety
// Handles are live, strings nul-terminated, `holds` writable and
// `report_json` null or writable.
enum CoobsStatus coobs_check(const struct CoobsContext *ctx,
                             const char *property,
                             const struct CoobsGenerator *spec,
                             const struct CoobsGenerator *ambient,
                             bool *holds,
                             char **report_json);

// Runs `algorithm` (as named by `coobs synth`). `ambient` may be null.
// `*result` receives a new handle, which may hold the empty generator;
// `report_json`, if non-null, receives the synthesis report with an empty
// `result` path.
//
// # Safety
// Handles are live, strings nul-terminated, `result` writable and
// `report_json` null or writable.
enum CoobsStatus coobs_synthesize(const struct CoobsContext *ctx,
                                  const char *algorithm,
                                  const struct CoobsGenerator *spec,
                                  const struct CoobsGenerator *ambient,
                                  struct CoobsGenerator **result,
                                  char **report_json);

// Local supervisor of `agent` for a synthesized `result`.
//
// # Safety
// Handles are live, `agent` nul-terminated, `out` writable.
enum CoobsStatus coobs_extract_local_supervisor(const struct CoobsContext *ctx,
                                                const struct CoobsGenerator *result,
                                                const char *agent,
                                                struct CoobsGenerator **out);

// Natural projection onto the events of `keep_json`, a JSON array of
// event names.
//
// # Safety
// `g` is live, `keep_json` nul-terminated, `out` writable.
enum CoobsStatus coobs_project(const struct CoobsGenerator *g,
                               const char *keep_json,
                               struct CoobsGenerator **out);

// Library version, statically allocated.
const char *coobs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COOBS_H */
