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

#include "mdhc/bench.hpp"

#include "mdhc/errors.hpp"

#include <set>
#include <sstream>

namespace mdhc {

namespace {

std::vector<NodeIndex> request_set(const std::string& text, const std::vector<std::uint32_t>& sizes,
                                   SeededStream& rng) {
    if (text == "all") {
        return all_indices(sizes);
    }
    const std::string prefix = "sample:";
    if (text.rfind(prefix, 0) != 0) {
        throw Error(Errc::invalid_argument, "requests must be 'all' or 'sample:K'");
    }
    std::uint64_t k = 0;
    try {
        std::size_t used = 0;
        k = std::stoull(text.substr(prefix.size()), &used);
        if (used != text.size() - prefix.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw Error(Errc::invalid_argument, "bad sample count in '" + text + "'");
    }
    std::set<NodeIndex> picked;
    picked.insert(NodeIndex::zeros(sizes.size()));
    picked.insert(NodeIndex(sizes));
    for (std::uint64_t i = 0; i < k; ++i) {
        NodeIndex index = NodeIndex::zeros(sizes.size());
        for (std::size_t d = 0; d < sizes.size(); ++d) {
            index.k[d] = static_cast<std::uint32_t>(rng.below(BigInt(sizes[d]) + 1).get_ui());
        }
        picked.insert(std::move(index));
    }
    return {picked.begin(), picked.end()};
}

}  // namespace

BenchRow run_bench(const BenchConfig& config) {
    if (config.n < 1) {
        throw Error(Errc::invalid_argument, "n must be at least 1");
    }
    const std::size_t m = config.shape == BenchShape::linear ? 1 : config.m;
    if (m < 1) {
        throw Error(Errc::invalid_argument, "m must be at least 1");
    }
    const Profile& profile = profile_by_name(config.profile);
    SeededStream rng(config.seed);
    SeededStream modulus_rng = rng.fork("bench-modulus");
    SeededStream start_rng = rng.fork("bench-start");
    SeededStream request_rng = rng.fork("bench-requests");

    TrapdoorModulus modulus = generate_modulus(profile.prime_bits, modulus_rng);
    SecretChain chain;
    chain.params.modulus = modulus.modulus;
    chain.params.exponents = select_exponents(m, modulus);
    chain.params.sizes.assign(m, config.n);
    chain.start = random_start(modulus.modulus, start_rng);

    auto requests = request_set(config.requests, chain.params.sizes, request_rng);
    TraversalReport report = measure_traversal(chain, config.strategy, requests);

    BenchRow row;
    row.shape = config.shape == BenchShape::linear ? "linear" : "mdhc";
    row.strategy = strategy_name(config.strategy);
    row.nodes = chain.params.node_count();
    row.storage_nodes = report.peak_storage;
    row.worst_modexps = report.worst();
    row.requests = requests.size();
    return row;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "shape\tN_nodes\tstorage_nodes\tworst_modexps\tproduct\n";
    for (const auto& row : rows) {
        out << row.shape << '\t' << row.nodes.get_str() << '\t' << row.storage_nodes << '\t' << row.worst_modexps
            << '\t' << row.product().get_str() << '\n';
    }
    return out.str();
}

TraversalStrategy parse_strategy(const std::string& name, std::uint32_t t) {
    if (name == "store_all") return {TraversalKind::store_all, 1};
    if (name == "store_root_only") return {TraversalKind::store_root_only, 1};
    if (name == "checkpoint") {
        if (t < 1) throw Error(Errc::invalid_argument, "checkpoint spacing must be at least 1");
        return {TraversalKind::checkpoint_every_t, t};
    }
    throw Error(Errc::invalid_argument, "unknown strategy '" + name + "'");
}

std::string strategy_name(const TraversalStrategy& strategy) {
    switch (strategy.kind) {
        case TraversalKind::store_all:
            return "store_all";
        case TraversalKind::store_root_only:
            return "store_root_only";
        case TraversalKind::checkpoint_every_t:
            return "checkpoint:" + std::to_string(strategy.t);
    }
    return "unknown";
}

}  // namespace mdhc
