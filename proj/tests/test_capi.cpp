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

// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdhc/mdhc.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    mdhc_string_free(s);
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// M = 23 * 47, exponents 3, 5, 7, sizes (2, 1, 1), start 123.
mdhc_chain* small_chain() {
    const char* exponents[] = {"3", "5", "7"};
    const uint32_t sizes[] = {2, 1, 1};
    mdhc_chain* chain = nullptr;
    REQUIRE(mdhc_chain_create("439", exponents, sizes, 3, "7b", &chain) == MDHC_OK);
    return chain;
}

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(std::string(mdhc_version()) == "1.0.0");
    CHECK(std::string(mdhc_status_string(MDHC_OK)).size() > 0);
    CHECK(std::string(mdhc_status_string(MDHC_ERR_FORMAT)) != mdhc_status_string(MDHC_ERR_IO));
    char* seed = nullptr;
    REQUIRE(mdhc_entropy_seed(&seed) == MDHC_OK);
    CHECK(take(seed).size() == 32);
}

TEST_CASE("chain handles") {
    mdhc_chain* chain = small_chain();
    // Index counts remaining steps: the start sits at the sizes, the root at zero.
    const uint32_t start[] = {2, 1, 1};
    const uint32_t zero[] = {0, 0, 0};
    char* value = nullptr;
    mdhc_op_count cost{};
    REQUIRE(mdhc_chain_node(chain, start, 3, &value, &cost) == MDHC_OK);
    CHECK(take(value) == "7b");
    CHECK(cost.modexp == 0);

    REQUIRE(mdhc_chain_root(chain, 0, &value, &cost) == MDHC_OK);
    std::string walked = take(value);
    CHECK(cost.modexp == 4);

    CHECK(mdhc_chain_root(chain, 1, &value, &cost) == MDHC_ERR_STATE);
    CHECK(std::string(mdhc_last_error()).size() > 0);
    REQUIRE(mdhc_chain_set_trapdoor(chain, "17", "2f") == MDHC_OK);
    REQUIRE(mdhc_chain_root(chain, 1, &value, &cost) == MDHC_OK);
    CHECK(take(value) == walked);
    CHECK(cost.modexp == 1);

    const uint32_t mid[] = {1, 0, 1};
    REQUIRE(mdhc_chain_node(chain, mid, 3, &value, &cost) == MDHC_OK);
    std::string node = take(value);
    int valid = 0;
    REQUIRE(mdhc_chain_verify_path(chain, mid, 3, node.c_str(), walked.c_str(), &valid, &cost) == MDHC_OK);
    CHECK(valid == 1);
    CHECK(cost.modexp == 2);
    REQUIRE(mdhc_chain_verify_path(chain, mid, 3, "7b", walked.c_str(), &valid, &cost) == MDHC_OK);
    CHECK(valid == 0);

    const uint32_t past[] = {3, 1, 1};
    CHECK(mdhc_chain_node(chain, past, 3, &value, &cost) == MDHC_ERR_RANGE);
    CHECK(mdhc_chain_node(chain, zero, 2, &value, &cost) == MDHC_ERR_RANGE);
    CHECK(mdhc_chain_node(nullptr, start, 3, &value, &cost) == MDHC_ERR_INVALID_ARGUMENT);
    CHECK(mdhc_chain_set_trapdoor(chain, "17", "1d") == MDHC_ERR_ARITHMETIC);
    mdhc_chain_destroy(chain);
    mdhc_chain_destroy(nullptr);
}

TEST_CASE("chain creation rejects bad input") {
    const char* exponents[] = {"3", "5"};
    const uint32_t sizes[] = {1, 1};
    mdhc_chain* chain = nullptr;
    CHECK(mdhc_chain_create("439", exponents, sizes, 2, "7B", &chain) == MDHC_ERR_FORMAT);
    CHECK(mdhc_chain_create("439", exponents, sizes, 2, "xyz", &chain) == MDHC_ERR_FORMAT);
    CHECK(mdhc_chain_create("439", exponents, sizes, 0, "7b", &chain) == MDHC_ERR_INVALID_ARGUMENT);
    const char* repeated[] = {"3", "3"};
    CHECK(mdhc_chain_create("439", repeated, sizes, 2, "7b", &chain) != MDHC_OK);
    CHECK(chain == nullptr);
}

TEST_CASE("workspace lifecycle") {
    TempDir dir("mdhc-capi-test");
    const std::string root = dir.path.string();
    char* text = nullptr;
    REQUIRE(mdhc_params_generate(root.c_str(), "toy", 0, 0, "c0ffee", &text) == MDHC_OK);
    CHECK(take(text).find("\"seed\": \"c0ffee\"") != std::string::npos);
    CHECK(mdhc_params_generate(root.c_str(), "toy", 0, 0, "c0ffee", &text) != MDHC_OK);

    mdhc_workspace* ws = nullptr;
    REQUIRE(mdhc_workspace_open(root.c_str(), &ws) == MDHC_OK);
    REQUIRE(mdhc_mint(ws, "s1", 0, "01", "alice", nullptr, &text) == MDHC_OK);
    take(text);
    REQUIRE(mdhc_pay(ws, "alice", "shop", &text) == MDHC_OK);
    std::string payment = take(text);

    REQUIRE(mdhc_verify(ws, "shop", payment.c_str(), &text) == MDHC_OK);
    CHECK(take(text) == "accept");
    uint64_t credited = 0;
    REQUIRE(mdhc_redeem(ws, "shop", &credited, &text) == MDHC_OK);
    take(text);
    CHECK(credited == 1);
    mdhc_workspace_close(ws);

    // State survives a reopen; the same coin is now spent.
    REQUIRE(mdhc_workspace_open(root.c_str(), &ws) == MDHC_OK);
    CHECK(mdhc_verify(ws, "shop", payment.c_str(), &text) == MDHC_REJECTED);
    CHECK(take(text) == "double_spent");
    CHECK(mdhc_verify(ws, "kiosk", payment.c_str(), &text) == MDHC_REJECTED);
    CHECK(take(text) == "wrong_vendor");
    CHECK(mdhc_verify(ws, "kiosk", "{}", &text) == MDHC_ERR_FORMAT);
    CHECK(mdhc_mint(ws, "s3", 0, "01", "alice", nullptr, &text) == MDHC_ERR_INVALID_ARGUMENT);
    CHECK(mdhc_mint(ws, "s1", 0, "01", "bad name", nullptr, &text) == MDHC_ERR_INVALID_ARGUMENT);
    mdhc_workspace_close(ws);

    std::ofstream(dir.path / "ledger.jsonl", std::ios::app) << "garbage\n";
    CHECK(mdhc_workspace_open(root.c_str(), &ws) == MDHC_ERR_STATE);
    CHECK(std::string(mdhc_last_error()).find("line") != std::string::npos);
    CHECK(mdhc_workspace_open((root + "/missing").c_str(), &ws) == MDHC_ERR_IO);
}

TEST_CASE("scenario and bench entry points") {
    std::ifstream in(std::string(MDHC_SCENARIO_DIR) + "/s2_chain.json");
    std::stringstream script;
    script << in.rdbuf();
    char* text = nullptr;
    REQUIRE(mdhc_scenario_run(script.str().c_str(), &text) == MDHC_OK);
    CHECK(take(text).find("# OK") != std::string::npos);

    REQUIRE(mdhc_bench("linear", 100, 1, "store_all", 0, "all", "toy", "01", &text) == MDHC_OK);
    std::string table = take(text);
    CHECK(table.find("linear\t101\t101\t0\t") != std::string::npos);
    CHECK(mdhc_bench("cube", 1, 1, "store_all", 0, "all", "toy", "01", &text) == MDHC_ERR_INVALID_ARGUMENT);
}
