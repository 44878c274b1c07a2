/*
 * Copyright 2026 The mdhc Authors
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

#ifndef MDHC_H
#define MDHC_H

/* C interface to the multi-dimensional hash chain library.
 *
 * Objects are opaque handles. Every call returns an mdhc_status; on failure
 * mdhc_last_error() describes the problem for the calling thread. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with mdhc_string_free(). Big integers cross the boundary as
 * canonical lowercase hexadecimal strings. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MDHC_API __declspec(dllexport)
#else
#define MDHC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mdhc_status {
    MDHC_OK = 0,
    /* The protocol rejected the request (double spend, forged coin, ...). */
    MDHC_REJECTED = 1,
    MDHC_ERR_INVALID_ARGUMENT = 2,
    MDHC_ERR_RANGE = 3,
    /* Not invertible, not a safe prime, prime search exhausted. */
    MDHC_ERR_ARITHMETIC = 4,
    /* Missing trapdoor, exhausted chain, capacity exceeded, unbound dimension. */
    MDHC_ERR_STATE = 5,
    MDHC_ERR_FORMAT = 6,
    MDHC_ERR_IO = 7,
    MDHC_ERR_INTERNAL = 8
} mdhc_status;

typedef struct mdhc_chain mdhc_chain;
typedef struct mdhc_workspace mdhc_workspace;

typedef struct mdhc_op_count {
    uint64_t modexp;
    uint64_t modmul;
} mdhc_op_count;

MDHC_API const char* mdhc_version(void);
MDHC_API const char* mdhc_status_string(mdhc_status status);
MDHC_API const char* mdhc_last_error(void);
MDHC_API void mdhc_string_free(char* str);
/* Fresh 16-byte seed from system entropy, as lowercase hex. */
MDHC_API mdhc_status mdhc_entropy_seed(char** seed_hex);

/* ---- chains ---------------------------------------------------------- */

/* A chain with sizes[0..m) over exponents_hex[0..m) modulo modulus_hex,
 * starting from start_hex. */
MDHC_API mdhc_status mdhc_chain_create(const char* modulus_hex, const char* const* exponents_hex,
                                       const uint32_t* sizes, size_t m, const char* start_hex,
                                       mdhc_chain** out);
/* Attaches the factorization (safe primes, any bit lengths) to enable trapdoor roots. */
MDHC_API mdhc_status mdhc_chain_set_trapdoor(mdhc_chain* chain, const char* p_hex, const char* q_hex);
MDHC_API void mdhc_chain_destroy(mdhc_chain* chain);

MDHC_API mdhc_status mdhc_chain_node(const mdhc_chain* chain, const uint32_t* index, size_t m,
                                     char** value_hex, mdhc_op_count* cost);
MDHC_API mdhc_status mdhc_chain_root(const mdhc_chain* chain, int use_trapdoor, char** value_hex,
                                     mdhc_op_count* cost);
MDHC_API mdhc_status mdhc_chain_verify_path(const mdhc_chain* chain, const uint32_t* index, size_t m,
                                            const char* value_hex, const char* root_hex, int* valid,
                                            mdhc_op_count* cost);

/* ---- file-backed workspace -------------------------------------------- */

/* seed_hex may be NULL for entropy mode; the seed used is in the summary. */
MDHC_API mdhc_status mdhc_params_generate(const char* dir, const char* profile, size_t prime_bits,
                                          size_t m, const char* seed_hex, char** summary_json);
MDHC_API mdhc_status mdhc_workspace_open(const char* dir, mdhc_workspace** out);
MDHC_API void mdhc_workspace_close(mdhc_workspace* ws);

/* scheme is "s1" or "s2"; length is ignored for s1; vendor_tag may be NULL. */
MDHC_API mdhc_status mdhc_mint(mdhc_workspace* ws, const char* scheme, uint32_t length,
                               const char* seed_hex, const char* customer, const char* vendor_tag,
                               char** summary_json);
MDHC_API mdhc_status mdhc_pay(mdhc_workspace* ws, const char* customer, const char* vendor,
                              char** payment_json);
/* MDHC_OK or MDHC_REJECTED; *outcome names the verdict either way. */
MDHC_API mdhc_status mdhc_verify(mdhc_workspace* ws, const char* vendor, const char* payment_json,
                                 char** outcome);
MDHC_API mdhc_status mdhc_redeem(mdhc_workspace* ws, const char* vendor, uint64_t* credited,
                                 char** summary_json);

/* ---- scenarios and benchmarks ----------------------------------------- */

/* MDHC_REJECTED if any step's outcome differs from its expectation. */
MDHC_API mdhc_status mdhc_scenario_run(const char* script_json, char** report_text);

/* shape "linear" | "mdhc"; strategy "store_all" | "store_root_only" |
 * "checkpoint" (every t steps); requests "all" | "sample:K"; profile names the
 * modulus size. Emits a tab-separated table with a header line. */
MDHC_API mdhc_status mdhc_bench(const char* shape, uint32_t n, size_t m, const char* strategy,
                                uint32_t t, const char* requests, const char* profile,
                                const char* seed_hex, char** table);

#ifdef __cplusplus
}
#endif

#endif /* MDHC_H */
