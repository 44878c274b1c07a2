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

#pragma once

#include "mdhc/chain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mdhc {

enum class BenchShape { linear, mdhc };

struct BenchConfig {
    BenchShape shape = BenchShape::mdhc;
    std::uint32_t n = 1;
    std::size_t m = 1;  // forced to 1 for the linear shape
    TraversalStrategy strategy;
    /// "all" or "sample:K" (root, start node and K seeded random indices).
    std::string requests = "all";
    std::string profile = "toy";
    Bytes seed;
};

struct BenchRow {
    std::string shape;
    std::string strategy;
    BigInt nodes;
    std::uint64_t storage_nodes = 0;
    std::uint64_t worst_modexps = 0;
    std::uint64_t requests = 0;

    BigInt product() const { return BigInt(storage_nodes) * worst_modexps; }
};

BenchRow run_bench(const BenchConfig& config);

/// Tab-separated with header: shape, N_nodes, storage_nodes, worst_modexps, product.
std::string format_bench_table(const std::vector<BenchRow>& rows);

TraversalStrategy parse_strategy(const std::string& name, std::uint32_t t);
std::string strategy_name(const TraversalStrategy& strategy);

}  // namespace mdhc
