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

#include "mdhc/chain.hpp"

#include "mdhc/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mdhc {

namespace {

constexpr std::uint64_t kMaxStoredNodes = 1ull << 24;

std::string index_text(const NodeIndex& index) {
    std::string out = "(";
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(index[i]);
    }
    return out + ")";
}

std::uint64_t lattice_size(const std::vector<std::uint32_t>& sizes) {
    std::uint64_t total = 1;
    for (auto n : sizes) {
        if (total > kMaxStoredNodes / (std::uint64_t{n} + 1)) {
            throw Error(Errc::capacity_exceeded, "lattice too large to store");
        }
        total *= std::uint64_t{n} + 1;
    }
    return total;
}

}  // namespace

std::uint64_t NodeIndex::sum() const noexcept {
    return std::accumulate(k.begin(), k.end(), std::uint64_t{0});
}

bool NodeIndex::dominated_by(const NodeIndex& other) const {
    if (other.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (k[i] > other.k[i]) return false;
    }
    return true;
}

BigInt ChainParams::node_count() const {
    BigInt total = 1;
    for (auto n : sizes) {
        total *= BigInt(n) + 1;
    }
    return total;
}

void ChainParams::validate() const {
    if (sizes.empty()) {
        throw Error(Errc::invalid_argument, "chain needs at least one dimension");
    }
    if (exponents.size() != sizes.size()) {
        throw Error(Errc::invalid_argument, "exponent count " + std::to_string(exponents.size()) +
                                                " does not match dimension count " +
                                                std::to_string(sizes.size()));
    }
    if (modulus < 5) {
        throw Error(Errc::invalid_argument, "chain modulus must be at least 5");
    }
    for (const auto& c : exponents.values) {
        if (c < 2) {
            throw Error(Errc::invalid_argument, "chain exponents must be at least 2");
        }
    }
}

ChainParams PublicParams::chain(std::vector<std::uint32_t> sizes) const {
    if (sizes.size() > exponents.size()) {
        throw Error(Errc::invalid_argument, "requested " + std::to_string(sizes.size()) +
                                                " dimensions but only " +
                                                std::to_string(exponents.size()) + " exponents exist");
    }
    ChainParams out;
    out.modulus = modulus;
    out.exponents.values.assign(exponents.values.begin(),
                                exponents.values.begin() + static_cast<std::ptrdiff_t>(sizes.size()));
    out.sizes = std::move(sizes);
    return out;
}

void SecretChain::validate() const {
    params.validate();
    if (start < 2 || start > params.modulus - 2) {
        throw Error(Errc::invalid_argument, "starting value must lie in [2, M-2]");
    }
    if (gcd(start, params.modulus) != 1) {
        throw Error(Errc::invalid_argument, "starting value must be coprime to M");
    }
}

BigInt random_start(const BigInt& modulus, SeededStream& rng) {
    if (modulus < 5) {
        throw Error(Errc::invalid_argument, "modulus too small for a starting value");
    }
    for (;;) {
        BigInt x = rng.between(2, modulus - 2);
        if (gcd(x, modulus) == 1) {
            return x;
        }
    }
}

void check_index(const ChainParams& params, const NodeIndex& index) {
    if (index.size() != params.dimensions()) {
        throw Error(Errc::out_of_range, "index " + index_text(index) + " has wrong dimension count");
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] > params.sizes[i]) {
            throw Error(Errc::out_of_range, "index " + index_text(index) + " exceeds chain size in dimension " +
                                                std::to_string(i + 1));
        }
    }
}

BigInt apply_hash(const ChainParams& params, std::size_t dim, const BigInt& x, OpCounter& counter) {
    if (dim < 1 || dim > params.exponents.size()) {
        throw Error(Errc::out_of_range, "dimension " + std::to_string(dim) + " outside 1.." +
                                            std::to_string(params.exponents.size()));
    }
    ++counter.modexp;
    return mod_pow(x, params.exponents[dim - 1], params.modulus);
}

BigInt apply_hash(const ChainParams& params, std::size_t dim, const BigInt& x) {
    OpCounter unused;
    return apply_hash(params, dim, x, unused);
}

Node node_at(const SecretChain& chain, const NodeIndex& index, OpCounter& counter,
             std::span<const std::size_t> order) {
    check_index(chain.params, index);
    std::vector<bool> seen(index.size(), false);
    if (order.size() != index.size()) {
        throw Error(Errc::invalid_argument, "dimension order must be a permutation");
    }
    for (auto d : order) {
        if (d >= index.size() || seen[d]) {
            throw Error(Errc::invalid_argument, "dimension order must be a permutation");
        }
        seen[d] = true;
    }
    BigInt value = chain.start;
    for (auto d : order) {
        for (std::uint32_t step = index[d]; step < chain.params.sizes[d]; ++step) {
            value = apply_hash(chain.params, d + 1, value, counter);
        }
    }
    return Node{index, std::move(value)};
}

Node node_at(const SecretChain& chain, const NodeIndex& index, OpCounter& counter) {
    std::vector<std::size_t> order(index.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return node_at(chain, index, counter, order);
}

Node root_naive(const SecretChain& chain, OpCounter& counter) {
    return node_at(chain, NodeIndex::zeros(chain.params.dimensions()), counter);
}

BigInt reduced_exponent(const ExponentSet& exponents, std::span<const std::uint32_t> powers,
                        const BigInt& totient, OpCounter& counter) {
    if (powers.size() > exponents.size()) {
        throw Error(Errc::invalid_argument, "more powers than exponents");
    }
    BigInt acc = 1;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        for (std::uint32_t t = 0; t < powers[i]; ++t) {
            acc = acc * exponents[i] % totient;
            ++counter.modmul;
        }
    }
    return acc;
}

Node root_trapdoor(const SecretChain& chain, OpCounter& counter) {
    if (!chain.trapdoor) {
        throw Error(Errc::missing_trapdoor, "trapdoor root requires the factorization of M");
    }
    if (chain.trapdoor->modulus != chain.params.modulus) {
        throw Error(Errc::invalid_argument, "trapdoor does not match the chain modulus");
    }
    BigInt exponent = reduced_exponent(chain.params.exponents, chain.params.sizes,
                                       chain.trapdoor->totient, counter);
    ++counter.modexp;
    return Node{NodeIndex::zeros(chain.params.dimensions()),
                mod_pow(chain.start, exponent, chain.params.modulus)};
}

bool verify_edge(const ChainParams& params, const Node& child, const Node& parent, std::size_t dim) {
    check_index(params, child.index);
    check_index(params, parent.index);
    if (dim < 1 || dim > params.dimensions()) {
        throw Error(Errc::out_of_range, "dimension " + std::to_string(dim) + " out of range");
    }
    for (std::size_t i = 0; i < params.dimensions(); ++i) {
        std::uint64_t expected = parent.index[i] + (i + 1 == dim ? 1u : 0u);
        if (child.index[i] != expected) {
            throw Error(Errc::not_adjacent, "nodes " + index_text(child.index) + " and " +
                                                index_text(parent.index) +
                                                " are not adjacent in dimension " + std::to_string(dim));
        }
    }
    return apply_hash(params, dim, child.value) == parent.value;
}

bool verify_path_to_root(const ChainParams& params, const Node& node, const BigInt& root_value,
                         OpCounter& counter) {
    check_index(params, node.index);
    BigInt value = node.value;
    for (std::size_t d = 0; d < params.dimensions(); ++d) {
        for (std::uint32_t step = 0; step < node.index[d]; ++step) {
            value = apply_hash(params, d + 1, value, counter);
        }
    }
    return value == root_value;
}

std::vector<NodeIndex> all_indices(const std::vector<std::uint32_t>& sizes) {
    std::vector<NodeIndex> out;
    out.reserve(lattice_size(sizes));
    NodeIndex current = NodeIndex::zeros(sizes.size());
    for (;;) {
        out.push_back(current);
        bool advanced = false;
        for (std::size_t d = sizes.size(); d > 0 && !advanced; --d) {
            if (current.k[d - 1] < sizes[d - 1]) {
                ++current.k[d - 1];
                advanced = true;
            } else {
                current.k[d - 1] = 0;
            }
        }
        if (!advanced) return out;
    }
}

std::uint64_t TraversalReport::worst() const {
    if (request_modexps.empty()) return 0;
    return *std::max_element(request_modexps.begin(), request_modexps.end());
}

TraversalReport measure_traversal(const SecretChain& chain, const TraversalStrategy& strategy,
                                  std::span<const NodeIndex> requests) {
    const auto& params = chain.params;
    for (const auto& index : requests) {
        check_index(params, index);
    }
    TraversalReport report;
    report.request_modexps.reserve(requests.size());

    switch (strategy.kind) {
        case TraversalKind::store_root_only: {
            report.peak_storage = 1;
            for (const auto& index : requests) {
                OpCounter counter;
                node_at(chain, index, counter);
                report.request_modexps.push_back(counter.modexp);
            }
            break;
        }
        case TraversalKind::store_all: {
            lattice_size(params.sizes);
            std::map<NodeIndex, BigInt> stored;
            OpCounter counter;
            auto indices = all_indices(params.sizes);
            for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
                std::size_t d = 0;
                while (d < params.dimensions() && (*it)[d] == params.sizes[d]) ++d;
                if (d == params.dimensions()) {
                    stored.emplace(*it, chain.start);
                    continue;
                }
                NodeIndex above = *it;
                ++above.k[d];
                stored.emplace(*it, apply_hash(params, d + 1, stored.at(above), counter));
            }
            report.precompute_modexps = counter.modexp;
            report.peak_storage = stored.size();
            for (const auto& index : requests) {
                (void)stored.at(index);
                report.request_modexps.push_back(0);
            }
            break;
        }
        case TraversalKind::checkpoint_every_t: {
            const std::uint32_t t = strategy.t;
            if (t < 1) {
                throw Error(Errc::invalid_argument, "checkpoint spacing must be at least 1");
            }
            std::map<NodeIndex, BigInt> stored;
            OpCounter counter;
            auto indices = all_indices(params.sizes);
            for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
                bool checkpoint = true;
                for (std::size_t i = 0; i < params.dimensions(); ++i) {
                    checkpoint = checkpoint && (params.sizes[i] - (*it)[i]) % t == 0;
                }
                if (!checkpoint) continue;
                std::size_t d = 0;
                while (d < params.dimensions() && (*it)[d] == params.sizes[d]) ++d;
                if (d == params.dimensions()) {
                    stored.emplace(*it, chain.start);
                    continue;
                }
                NodeIndex above = *it;
                above.k[d] += t;
                BigInt value = stored.at(above);
                for (std::uint32_t s = 0; s < t; ++s) {
                    value = apply_hash(params, d + 1, value, counter);
                }
                stored.emplace(*it, std::move(value));
            }
            report.precompute_modexps = counter.modexp;
            report.peak_storage = stored.size();
            for (const auto& index : requests) {
                OpCounter request_counter;
                NodeIndex anchor = index;
                for (std::size_t i = 0; i < params.dimensions(); ++i) {
                    anchor.k[i] += (params.sizes[i] - index[i]) % t;
                }
                BigInt value = stored.at(anchor);
                for (std::size_t i = 0; i < params.dimensions(); ++i) {
                    for (std::uint32_t s = index[i]; s < anchor[i]; ++s) {
                        value = apply_hash(params, i + 1, value, request_counter);
                    }
                }
                report.request_modexps.push_back(request_counter.modexp);
            }
            break;
        }
    }
    return report;
}

}  // namespace mdhc
