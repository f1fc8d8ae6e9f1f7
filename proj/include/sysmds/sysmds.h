/*
 * Copyright 2026 The sysmds Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libsysmds: systematic (n,k)-MDS codes (2k <= n) whose
 * single-node repair from k+1 helpers downloads k+1 symbols per stripe.
 *
 * Conventions:
 *  - Every fallible call returns sysmds_status; SYSMDS_OK is 0. On failure
 *    sysmds_last_error() holds a message for the calling thread.
 *  - Node numbers are 1-based.
 *  - Handles are opaque and owned by the caller; release them with the
 *    matching *_free function. Strings and byte buffers returned through
 *    out-parameters are released with sysmds_free_string / sysmds_free_bytes.
 *  - A handle may be read concurrently but must not be mutated concurrently.
 */

#ifndef SYSMDS_SYSMDS_H_
#define SYSMDS_SYSMDS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SYSMDS_BUILDING_LIBRARY)
#    define SYSMDS_API __declspec(dllexport)
#  else
#    define SYSMDS_API __declspec(dllimport)
#  endif
#else
#  define SYSMDS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SYSMDS_MAX_NODES 64
#define SYSMDS_DEFAULT_MAX_RETRIES 64u

typedef enum sysmds_status {
  SYSMDS_OK = 0,
  SYSMDS_ERR_INVALID_ARGUMENT = 1,
  SYSMDS_ERR_BAD_FIELD = 2,
  SYSMDS_ERR_BAD_SHAPE = 3,
  SYSMDS_ERR_UNSUPPORTED_SHAPE = 4,
  SYSMDS_ERR_FIELD_TOO_SMALL = 5,
  SYSMDS_ERR_ZERO_INVERSE = 6,
  SYSMDS_ERR_NON_SQUARE = 7,
  SYSMDS_ERR_SINGULAR = 8,
  SYSMDS_ERR_DIMENSION_MISMATCH = 9,
  SYSMDS_ERR_MISSING_NODE = 10,
  SYSMDS_ERR_BAD_HELPERS = 11,
  SYSMDS_ERR_RETRIES_EXHAUSTED = 12,
  SYSMDS_ERR_TOO_FEW_SURVIVORS = 13,
  SYSMDS_ERR_TOO_FEW_NODES = 14,
  SYSMDS_ERR_INVARIANT_VIOLATION = 15,
  SYSMDS_ERR_OVERFLOW = 16,
  SYSMDS_ERR_PARSE = 17,
  SYSMDS_ERR_INTERNAL = 18
} sysmds_status;

SYSMDS_API const char* sysmds_version(void);
SYSMDS_API const char* sysmds_status_name(sysmds_status status);
SYSMDS_API const char* sysmds_last_error(void);

SYSMDS_API void sysmds_free_string(char* text);
SYSMDS_API void sysmds_free_bytes(uint8_t* bytes);

/* ---- bounds ------------------------------------------------------------ */

/* Cut bound B*d / (k*(d-k+1)) as a reduced fraction num/den. */
SYSMDS_API sysmds_status sysmds_cut_bound(int64_t file_symbols, int64_t k, int64_t d,
                                          int64_t* num, int64_t* den);
/* Field-size threshold 2 * C(2n-1, 2k-1). */
SYSMDS_API sysmds_status sysmds_d0(uint64_t n, uint64_t k, uint64_t* out);

/* ---- code state -------------------------------------------------------- */

typedef struct sysmds_code sysmds_code;

typedef struct sysmds_code_info {
  uint32_t n;
  uint32_t k;
  uint32_t field_bits;
  uint32_t reduction_poly;
  uint64_t epoch;
  uint64_t history_length;
} sysmds_code_info;

typedef struct sysmds_verify_report {
  int ok;
  int mds_ok;
  uint64_t subsets_checked;
  uint64_t subsets_total;
  int systematic_ok;
  int history_ok;
  /* First rank-deficient subset ("u1,v1,...") when mds_ok is 0. */
  char violation[256];
  /* Reason when history_ok is 0. */
  char history_problem[256];
} sysmds_verify_report;

typedef struct sysmds_repair_result {
  uint32_t failed;
  uint32_t helper_count;
  uint32_t helpers[SYSMDS_MAX_NODES];
  uint32_t retries;
  uint64_t epoch_after;
  /* Per stripe: symbols fetched, the cut bound, and a full-decode repair. */
  uint64_t downloaded_symbols;
  int64_t bound_num;
  int64_t bound_den;
  uint64_t naive_symbols;
} sysmds_repair_result;

/* field_bits is 8 (GF(2^8), 0x11d) or 16 (GF(2^16), 0x1100b). */
SYSMDS_API sysmds_status sysmds_code_create(uint32_t n, uint32_t k, uint32_t field_bits,
                                            uint64_t seed, sysmds_code** out);
/* Structural parse of the code-file text; invariants are not checked. */
SYSMDS_API sysmds_status sysmds_code_parse(const char* text, size_t length, sysmds_code** out);
/* Parse and require the systematic and MDS invariants. */
SYSMDS_API sysmds_status sysmds_code_load(const char* text, size_t length, sysmds_code** out);
SYSMDS_API void sysmds_code_free(sysmds_code* code);

SYSMDS_API sysmds_status sysmds_code_serialize(const sysmds_code* code, char** text,
                                               size_t* length);
SYSMDS_API sysmds_status sysmds_code_get_info(const sysmds_code* code, sysmds_code_info* info);
SYSMDS_API sysmds_status sysmds_code_verify(const sysmds_code* code,
                                            sysmds_verify_report* report);

/* Repairs `failed` in place. helpers may be NULL (count 0) to use the k+1
 * lowest-numbered other nodes. The transcript is appended to the history. */
SYSMDS_API sysmds_status sysmds_code_repair(sysmds_code* code, uint32_t failed,
                                            const uint32_t* helpers, size_t helper_count,
                                            uint64_t seed, uint32_t max_retries,
                                            sysmds_repair_result* result);

/* ---- simulator --------------------------------------------------------- */

typedef struct sysmds_cluster sysmds_cluster;

typedef enum sysmds_failure_policy {
  SYSMDS_FAILURE_UNIFORM = 0,
  SYSMDS_FAILURE_ROUND_ROBIN = 1
} sysmds_failure_policy;

typedef struct sysmds_campaign_summary {
  uint32_t n;
  uint32_t k;
  uint32_t field_bits;
  uint64_t stripes;
  uint64_t rounds;
  uint64_t epoch;
  uint64_t downloaded_symbols;
  uint64_t naive_symbols;
  int64_t bound_num;
  int64_t bound_den;
  /* downloaded / naive; 0/0 when nothing was downloaded. */
  int64_t ratio_num;
  int64_t ratio_den;
  uint64_t total_retries;
  uint64_t total_draws;
  double mean_retries;
  double rejection_rate;
  uint64_t subsets_per_check;
  uint64_t mds_passed;
  uint64_t systematic_passed;
  uint64_t exact_u_repair_passed;
  uint64_t conservation_passed;
  uint64_t decode_passed;
  uint64_t bandwidth_passed;
  uint64_t checks_failed;
  int all_passed;
} sysmds_campaign_summary;

/* The cluster owns a random stream seeded with `seed`; every repair and
 * campaign on it draws from that stream. */
SYSMDS_API sysmds_status sysmds_cluster_ingest(const uint8_t* bytes, size_t length, uint32_t n,
                                               uint32_t k, uint32_t field_bits, uint64_t seed,
                                               sysmds_cluster** out);
SYSMDS_API void sysmds_cluster_free(sysmds_cluster* cluster);

SYSMDS_API sysmds_status sysmds_cluster_stripe_count(const sysmds_cluster* cluster,
                                                     uint64_t* stripes);
SYSMDS_API sysmds_status sysmds_cluster_fail(sysmds_cluster* cluster, uint32_t node);
SYSMDS_API sysmds_status sysmds_cluster_fail_and_repair(sysmds_cluster* cluster, uint32_t failed,
                                                        const uint32_t* helpers,
                                                        size_t helper_count,
                                                        sysmds_repair_result* result);
/* Decode from exactly k live nodes. */
SYSMDS_API sysmds_status sysmds_cluster_extract(const sysmds_cluster* cluster,
                                                const uint32_t* nodes, size_t node_count,
                                                uint8_t** bytes, size_t* length);
/* Read the systematic symbols of nodes 1..2k directly. */
SYSMDS_API sysmds_status sysmds_cluster_extract_systematic(const sysmds_cluster* cluster,
                                                           uint8_t** bytes, size_t* length);

/* report_json and summary_text may be NULL. */
SYSMDS_API sysmds_status sysmds_cluster_campaign(sysmds_cluster* cluster, uint64_t rounds,
                                                 sysmds_failure_policy policy,
                                                 uint32_t max_retries,
                                                 sysmds_campaign_summary* summary,
                                                 char** report_json, char** summary_text);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* SYSMDS_SYSMDS_H_ */
