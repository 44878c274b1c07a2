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

#include "mdhc/bigint.hpp"
#include "mdhc/numtheory.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mdhc {

/// Counts modular exponentiations (mod M) and multiplications (mod E).
struct OpCounter {
    std::uint64_t modexp = 0;
    std::uint64_t modmul = 0;

    bool operator==(const OpCounter&) const = default;
};

/// Public description of one multi-dimensional hash chain.
struct ChainParams {
    BigInt modulus;
    ExponentSet exponents;
    std::vector<std::uint32_t> sizes;

    std::size_t dimensions() const noexcept { return sizes.size(); }
    /// Product of (n_i + 1).
    BigInt node_count() const;
    /// Throws Errc::invalid_argument when the shape is inconsistent.
    void validate() const;

    bool operator==(const ChainParams&) const = default;
};

/// Position vector (k_1..k_m) in the chain lattice.
struct NodeIndex {
    std::vector<std::uint32_t> k;

    NodeIndex() = default;
    explicit NodeIndex(std::vector<std::uint32_t> digits) : k(std::move(digits)) {}
    static NodeIndex zeros(std::size_t m) { return NodeIndex(std::vector<std::uint32_t>(m, 0)); }

    std::size_t size() const noexcept { return k.size(); }
    std::uint32_t operator[](std::size_t i) const { return k[i]; }
    std::uint64_t sum() const noexcept;
    /// Coordinate-wise k_i <= other.k_i.
    bool dominated_by(const NodeIndex& other) const;

    auto operator<=>(const NodeIndex&) const = default;
};

struct Node {
    NodeIndex index;
    BigInt value;

    bool operator==(const Node&) const = default;
};

/// Chain owner's view: the starting node X_N and, for the bank, the trapdoor.
struct SecretChain {
    ChainParams params;
    BigInt start;
    std::optional<TrapdoorModulus> trapdoor;

    /// Start value must lie in [2, M-2] and be a unit mod M.
    void validate() const;
    NodeIndex start_index() const { return NodeIndex(params.sizes); }
    bool operator==(const SecretChain&) const = default;
};

/// Draws a valid starting value for `params` from the stream.
BigInt random_start(const BigInt& modulus, SeededStream& rng);

/// h_dim(x) = x^{c_dim} mod M, dim is 1-based.
BigInt apply_hash(const ChainParams& params, std::size_t dim, const BigInt& x, OpCounter& counter);
BigInt apply_hash(const ChainParams& params, std::size_t dim, const BigInt& x);

/// Forward hashes from X_N, n_i - k_i times per dimension in ascending order.
Node node_at(const SecretChain& chain, const NodeIndex& index, OpCounter& counter);
/// Same, applying dimensions in the given order (a permutation of 0..m-1).
Node node_at(const SecretChain& chain, const NodeIndex& index, OpCounter& counter,
             std::span<const std::size_t> order);

Node root_naive(const SecretChain& chain, OpCounter& counter);

/// X_0 = X_N^{prod c_i^{n_i} mod E} mod M; one modexp plus sum(n_i) modmuls.
Node root_trapdoor(const SecretChain& chain, OpCounter& counter);

/// prod c_i^{n_i} mod E via repeated multiplication, counted as modmuls.
BigInt reduced_exponent(const ExponentSet& exponents, std::span<const std::uint32_t> powers,
                        const BigInt& totient, OpCounter& counter);

/// True iff h_dim(child) == parent. Throws Errc::not_adjacent if the indices do
/// not differ by exactly one step in `dim` (1-based).
bool verify_edge(const ChainParams& params, const Node& child, const Node& parent, std::size_t dim);

/// Hashes node.value k_i times per dimension and compares with the root.
bool verify_path_to_root(const ChainParams& params, const Node& node, const BigInt& root_value,
                         OpCounter& counter);

void check_index(const ChainParams& params, const NodeIndex& index);

enum class TraversalKind { store_all, store_root_only, checkpoint_every_t };

struct TraversalStrategy {
    TraversalKind kind = TraversalKind::store_root_only;
    std::uint32_t t = 1;
};

struct TraversalReport {
    std::vector<std::uint64_t> request_modexps;
    std::uint64_t precompute_modexps = 0;
    std::uint64_t peak_storage = 0;

    std::uint64_t worst() const;
};

/// Serves `requests` under the given storage strategy and records exact costs.
TraversalReport measure_traversal(const SecretChain& chain, const TraversalStrategy& strategy,
                                  std::span<const NodeIndex> requests);

/// Every lattice index in lexicographic order.
std::vector<NodeIndex> all_indices(const std::vector<std::uint32_t>& sizes);

}  // namespace mdhc

namespace mdhc {

/// Bank-published parameters shared by every chain: M and c_1..c_m.
struct PublicParams {
    BigInt modulus;
    ExponentSet exponents;

    /// Chain over the first `sizes.size()` exponents.
    ChainParams chain(std::vector<std::uint32_t> sizes) const;
    bool operator==(const PublicParams&) const = default;
};

}  // namespace mdhc
