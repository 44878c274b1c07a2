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

#include "mdhc/mdhc.h"

#include "mdhc/bench.hpp"
#include "mdhc/errors.hpp"
#include "mdhc/scenario.hpp"
#include "mdhc/workspace.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct mdhc_chain {
    mdhc::SecretChain chain;
};

struct mdhc_workspace {
    std::unique_ptr<mdhc::Workspace> ws;
};

namespace {

thread_local std::string last_error;

mdhc_status status_of(mdhc::Errc code) {
    using mdhc::Errc;
    switch (code) {
        case Errc::invalid_argument:
            return MDHC_ERR_INVALID_ARGUMENT;
        case Errc::out_of_range:
            return MDHC_ERR_RANGE;
        case Errc::not_invertible:
        case Errc::not_safe_prime:
        case Errc::search_exhausted:
            return MDHC_ERR_ARITHMETIC;
        case Errc::missing_trapdoor:
        case Errc::capacity_exceeded:
        case Errc::chain_exhausted:
        case Errc::dimension_unbound:
        case Errc::inconsistent:
        case Errc::replay:
            return MDHC_ERR_STATE;
        case Errc::not_adjacent:
            return MDHC_ERR_INVALID_ARGUMENT;
        case Errc::format:
            return MDHC_ERR_FORMAT;
        case Errc::io:
            return MDHC_ERR_IO;
    }
    return MDHC_ERR_INTERNAL;
}

template <class F>
mdhc_status guard(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const mdhc::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return MDHC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MDHC_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return MDHC_ERR_INTERNAL;
    }
}

mdhc_status fail(mdhc_status status, const char* message) {
    last_error = message;
    return status;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put_cost(mdhc_op_count* cost, const mdhc::OpCounter& counter) {
    if (cost) {
        cost->modexp = counter.modexp;
        cost->modmul = counter.modmul;
    }
}

mdhc::NodeIndex index_of(const uint32_t* index, size_t m) {
    return mdhc::NodeIndex(std::vector<std::uint32_t>(index, index + m));
}

mdhc::Bytes seed_or_entropy(const char* seed_hex) {
    if (!seed_hex) return mdhc::SeededStream::entropy_seed();
    std::string s(seed_hex);
    if (s.empty() || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw mdhc::Error(mdhc::Errc::invalid_argument, "seed must be non-empty lowercase hex");
    }
    return mdhc::hex_to_bytes(s);
}

}  // namespace

extern "C" {

const char* mdhc_version(void) {
    return "1.0.0";
}

const char* mdhc_status_string(mdhc_status status) {
    switch (status) {
        case MDHC_OK: return "ok";
        case MDHC_REJECTED: return "rejected";
        case MDHC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case MDHC_ERR_RANGE: return "out of range";
        case MDHC_ERR_ARITHMETIC: return "arithmetic error";
        case MDHC_ERR_STATE: return "invalid state";
        case MDHC_ERR_FORMAT: return "format error";
        case MDHC_ERR_IO: return "i/o error";
        case MDHC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mdhc_last_error(void) {
    return last_error.c_str();
}

void mdhc_string_free(char* str) {
    std::free(str);
}

mdhc_status mdhc_entropy_seed(char** seed_hex) {
    if (!seed_hex) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *seed_hex = dup_string(mdhc::bytes_to_hex(mdhc::SeededStream::entropy_seed()));
        return MDHC_OK;
    });
}

mdhc_status mdhc_chain_create(const char* modulus_hex, const char* const* exponents_hex, const uint32_t* sizes,
                              size_t m, const char* start_hex, mdhc_chain** out) {
    if (!modulus_hex || !exponents_hex || !sizes || !start_hex || !out || m == 0) {
        return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument or zero dimensions");
    }
    return guard([&] {
        auto handle = std::make_unique<mdhc_chain>();
        handle->chain.params.modulus = mdhc::from_hex(modulus_hex);
        for (size_t i = 0; i < m; ++i) {
            if (!exponents_hex[i]) return fail(MDHC_ERR_INVALID_ARGUMENT, "null exponent");
            handle->chain.params.exponents.values.push_back(mdhc::from_hex(exponents_hex[i]));
        }
        handle->chain.params.sizes.assign(sizes, sizes + m);
        handle->chain.start = mdhc::from_hex(start_hex);
        mdhc::validate_exponents(handle->chain.params.exponents);
        handle->chain.validate();
        *out = handle.release();
        return MDHC_OK;
    });
}

mdhc_status mdhc_chain_set_trapdoor(mdhc_chain* chain, const char* p_hex, const char* q_hex) {
    if (!chain || !p_hex || !q_hex) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto modulus = mdhc::make_modulus(mdhc::from_hex(p_hex), mdhc::from_hex(q_hex), mdhc::BitLengthRule::any);
        if (modulus.modulus != chain->chain.params.modulus) {
            return fail(MDHC_ERR_INVALID_ARGUMENT, "p*q does not match the chain modulus");
        }
        mdhc::validate_exponents(chain->chain.params.exponents, modulus.totient);
        chain->chain.trapdoor = modulus;
        return MDHC_OK;
    });
}

void mdhc_chain_destroy(mdhc_chain* chain) {
    delete chain;
}

mdhc_status mdhc_chain_node(const mdhc_chain* chain, const uint32_t* index, size_t m, char** value_hex,
                            mdhc_op_count* cost) {
    if (!chain || !index || !value_hex) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mdhc::OpCounter counter;
        mdhc::Node node = mdhc::node_at(chain->chain, index_of(index, m), counter);
        *value_hex = dup_string(mdhc::to_hex(node.value));
        put_cost(cost, counter);
        return MDHC_OK;
    });
}

mdhc_status mdhc_chain_root(const mdhc_chain* chain, int use_trapdoor, char** value_hex, mdhc_op_count* cost) {
    if (!chain || !value_hex) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mdhc::OpCounter counter;
        mdhc::Node root = use_trapdoor ? mdhc::root_trapdoor(chain->chain, counter)
                                       : mdhc::root_naive(chain->chain, counter);
        *value_hex = dup_string(mdhc::to_hex(root.value));
        put_cost(cost, counter);
        return MDHC_OK;
    });
}

mdhc_status mdhc_chain_verify_path(const mdhc_chain* chain, const uint32_t* index, size_t m, const char* value_hex,
                                   const char* root_hex, int* valid, mdhc_op_count* cost) {
    if (!chain || !index || !value_hex || !root_hex || !valid) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mdhc::OpCounter counter;
        mdhc::Node node{index_of(index, m), mdhc::from_hex(value_hex)};
        *valid = mdhc::verify_path_to_root(chain->chain.params, node, mdhc::from_hex(root_hex), counter) ? 1 : 0;
        put_cost(cost, counter);
        return MDHC_OK;
    });
}

mdhc_status mdhc_params_generate(const char* dir, const char* profile, size_t prime_bits, size_t m,
                                 const char* seed_hex, char** summary_json) {
    if (!dir || !profile || !summary_json) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        std::string summary = mdhc::Workspace::create(dir, profile, prime_bits, m, seed_or_entropy(seed_hex));
        *summary_json = dup_string(summary);
        return MDHC_OK;
    });
}

mdhc_status mdhc_workspace_open(const char* dir, mdhc_workspace** out) {
    if (!dir || !out) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto handle = std::make_unique<mdhc_workspace>();
        handle->ws = std::make_unique<mdhc::Workspace>(dir);
        *out = handle.release();
        return MDHC_OK;
    });
}

void mdhc_workspace_close(mdhc_workspace* ws) {
    delete ws;
}

mdhc_status mdhc_mint(mdhc_workspace* ws, const char* scheme, uint32_t length, const char* seed_hex,
                      const char* customer, const char* vendor_tag, char** summary_json) {
    if (!ws || !scheme || !customer || !summary_json) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        std::optional<std::string> vendor;
        if (vendor_tag) vendor = vendor_tag;
        std::string summary = ws->ws->mint(scheme, length, seed_or_entropy(seed_hex), customer, vendor);
        *summary_json = dup_string(summary);
        return MDHC_OK;
    });
}

mdhc_status mdhc_pay(mdhc_workspace* ws, const char* customer, const char* vendor, char** payment_json) {
    if (!ws || !customer || !vendor || !payment_json) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *payment_json = dup_string(ws->ws->pay(customer, vendor));
        return MDHC_OK;
    });
}

mdhc_status mdhc_verify(mdhc_workspace* ws, const char* vendor, const char* payment_json, char** outcome) {
    if (!ws || !vendor || !payment_json || !outcome) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mdhc::Outcome verdict = ws->ws->verify(vendor, payment_json);
        *outcome = dup_string(std::string(mdhc::outcome_name(verdict)));
        if (!mdhc::is_success(verdict)) {
            last_error = "payment rejected: " + std::string(mdhc::outcome_name(verdict));
            return MDHC_REJECTED;
        }
        return MDHC_OK;
    });
}

mdhc_status mdhc_redeem(mdhc_workspace* ws, const char* vendor, uint64_t* credited, char** summary_json) {
    if (!ws || !vendor || !summary_json) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        std::uint64_t total = 0;
        bool all_ok = true;
        std::string summary = ws->ws->redeem(vendor, total, all_ok);
        *summary_json = dup_string(summary);
        if (credited) *credited = total;
        if (!all_ok) {
            last_error = "some items were rejected by the bank";
            return MDHC_REJECTED;
        }
        return MDHC_OK;
    });
}

mdhc_status mdhc_scenario_run(const char* script_json, char** report_text) {
    if (!script_json || !report_text) return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        mdhc::ScenarioReport report = mdhc::run_scenario(script_json);
        *report_text = dup_string(report.to_text());
        if (!report.ok()) {
            last_error = "scenario outcome differs from its expectation";
            return MDHC_REJECTED;
        }
        return MDHC_OK;
    });
}

mdhc_status mdhc_bench(const char* shape, uint32_t n, size_t m, const char* strategy, uint32_t t,
                       const char* requests, const char* profile, const char* seed_hex, char** table) {
    if (!shape || !strategy || !requests || !profile || !seed_hex || !table) {
        return fail(MDHC_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guard([&] {
        mdhc::BenchConfig config;
        std::string shape_name(shape);
        if (shape_name == "linear") {
            config.shape = mdhc::BenchShape::linear;
        } else if (shape_name == "mdhc") {
            config.shape = mdhc::BenchShape::mdhc;
        } else {
            return fail(MDHC_ERR_INVALID_ARGUMENT, "shape must be linear or mdhc");
        }
        config.n = n;
        config.m = m;
        config.strategy = mdhc::parse_strategy(strategy, t);
        config.requests = requests;
        config.profile = profile;
        config.seed = seed_or_entropy(seed_hex);
        *table = dup_string(mdhc::format_bench_table({mdhc::run_bench(config)}));
        return MDHC_OK;
    });
}

}  // extern "C"
