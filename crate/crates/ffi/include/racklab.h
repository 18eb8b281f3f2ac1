#ifndef RACKLAB_H
#define RACKLAB_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; `RL_OK` is zero.
 */
typedef enum RlStatus {
  RL_OK = 0,
  RL_NULL_POINTER = 1,
  RL_INVALID_TABLE = 2,
  RL_NOT_A_RACK = 3,
  RL_INVALID_PARAMS = 4,
  RL_CORRUPT_STREAM = 5,
  RL_INCONSISTENT_DECODE = 6,
  RL_OUT_OF_RANGE = 7,
  RL_INTERNAL = 8,
} RlStatus;

/**
 * Opaque rack handle.
 */
typedef struct RlRack RlRack;

typedef struct RlParams {
  uint32_t delta;
  uint32_t cap_l;
} RlParams;

typedef struct RlStats {
  size_t components;
  double zeta;
  double bound;
  uint64_t residual_bits;
  uint64_t header_bits;
  size_t total_bytes;
} RlStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *rl_status_message(enum RlStatus status);

/**
 * Builds a rack from a row-major `n × n` table, `table[x * n + y] = x ▷ y`.
 *
 * # Safety
 * `table` must point to `n * n` readable values and `out` to writable storage.
 */
enum RlStatus rl_rack_from_table(size_t n, const uint32_t *table, struct RlRack **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `rack` must be null or a handle not yet freed.
 */
void rl_rack_free(struct RlRack *rack);

/**
 * Order of the rack, or 0 for null.
 *
 * # Safety
 * `rack` must be null or a live handle.
 */
size_t rl_rack_order(const struct RlRack *rack);

/**
 * Writes `x ▷ y` to `out`.
 *
 * # Safety
 * `rack` must be a live handle and `out` writable.
 */
enum RlStatus rl_rack_op(const struct RlRack *rack, uint32_t x, uint32_t y, uint32_t *out);

/**
 * Writes whether `x ▷ x = x` for all `x`.
 *
 * # Safety
 * `rack` must be a live handle and `out` writable.
 */
enum RlStatus rl_rack_is_quandle(const struct RlRack *rack, bool *out);

/**
 * Copies the row-major table into `buf`, which must hold `len ≥ n * n` values.
 *
 * # Safety
 * `rack` must be a live handle and `buf` must have room for `len` values.
 */
enum RlStatus rl_rack_table(const struct RlRack *rack, uint32_t *buf, size_t len);

/**
 * Default codec parameters for order `n`.
 */
struct RlParams rl_default_params(size_t n);

/**
 * Encodes `rack`; the buffer written to `out_bytes` must be released with `rl_bytes_free`.
 *
 * # Safety
 * `rack` must be a live handle; `out_bytes` and `out_len` writable.
 */
enum RlStatus rl_encode(const struct RlRack *rack,
                        struct RlParams params,
                        uint8_t **out_bytes,
                        size_t *out_len);

/**
 * Releases a buffer from `rl_encode`.
 *
 * # Safety
 * `bytes` and `len` must come from one `rl_encode` call, or `bytes` be null.
 */
void rl_bytes_free(uint8_t *bytes, size_t len);

/**
 * Decodes a stream produced by `rl_encode`.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes and `out` be writable.
 */
enum RlStatus rl_decode(const uint8_t *bytes, size_t len, struct RlRack **out);

/**
 * Size accounting of the encoding of `rack`.
 *
 * # Safety
 * `rack` must be a live handle and `out` writable.
 */
enum RlStatus rl_encoding_stats(const struct RlRack *rack,
                                struct RlParams params,
                                struct RlStats *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RACKLAB_H */
