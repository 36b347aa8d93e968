#ifndef WEINGARTEN_H
#define WEINGARTEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/*
 Status codes returned by every function.
 */
typedef enum WgStatus {
  WG_STATUS_OK = 0,
  /*
   Malformed text, unknown family or mismatched element.
   */
  WG_STATUS_INVALID_ARGUMENT = 1,
  /*
   Well-formed input outside the supported domain, e.g. d < k.
   */
  WG_STATUS_DOMAIN_ERROR = 2,
  /*
   The linear system at this dimension is singular.
   */
  WG_STATUS_SINGULAR = 3,
  /*
   The output buffer is too short; `needed` holds the required size.
   */
  WG_STATUS_BUFFER_TOO_SMALL = 4,
  WG_STATUS_NULL_POINTER = 5,
  /*
   A bug: the engine panicked.
   */
  WG_STATUS_INTERNAL = 6,
} WgStatus;

/*
 Opaque engine handle.
 */
typedef struct WgEngine WgEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates an engine. Release it with `wg_engine_free`.
 */
struct WgEngine *wg_engine_new(void);

/*
 Releases an engine; null is ignored.

 # Safety
 `engine` must come from `wg_engine_new` and not be used afterwards.
 */
void wg_engine_free(struct WgEngine *engine);

/*
 Weingarten value as `p/q`.

 `family` is one of `u`, `o`, `coe`, `sp`, `aiii`; `element` is a
 permutation (`2,1`) or a pair partition (`1,2|3,4`). `dminus` is only
 read when `has_dminus` is true and is required for `aiii`. With `force`
 the dimension range check is skipped.

 # Safety
 String arguments must be NUL-terminated; `buf` must hold `len` bytes.
 */
enum WgStatus wg_value(const struct WgEngine *engine,
                       const char *family,
                       const char *element,
                       int64_t d,
                       int64_t dminus,
                       bool has_dminus,
                       bool force,
                       char *buf,
                       size_t len,
                       size_t *needed);

/*
 Number of paths from `element` to the empty vertex with `solid` solid
 edges, in decimal. `family` selects the graph as in `wg_value`.

 # Safety
 As for `wg_value`.
 */
enum WgStatus wg_count_paths(const struct WgEngine *engine,
                             const char *family,
                             const char *element,
                             uint32_t solid,
                             char *buf,
                             size_t len,
                             size_t *needed);

/*
 Exact Haar integral of a monomial such as
 `rows=1;cols=1;crows=1;ccols=1`, as `p/q`.

 # Safety
 As for `wg_value`.
 */
enum WgStatus wg_moment(const struct WgEngine *engine,
                        const char *family,
                        const char *monomial,
                        int64_t d,
                        int64_t dminus,
                        bool has_dminus,
                        char *buf,
                        size_t len,
                        size_t *needed);

/*
 Copies the calling thread's last error message into `buf`, truncating
 if needed. Returns the full message length in bytes (without the NUL).

 # Safety
 `buf` must hold `len` bytes, or be null.
 */
size_t wg_last_error(char *buf, size_t len);

/*
 Library version, a static NUL-terminated string.
 */
const char *wg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEINGARTEN_H */
