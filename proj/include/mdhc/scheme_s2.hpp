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

#include "mdhc/bank.hpp"
#include "mdhc/chain.hpp"
#include "mdhc/outcome.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mdhc {

/// Customer's handle on one coin chain: X_i hashed n times with c_i gives X_0.
struct CoinChainHandle {
    BigInt start;
    BigInt exponent;
    std::uint32_t exponent_index = 0;
    std::uint32_t length = 0;
    std::string root_id;
    CoinTags tags;

    ChainKey key() const { return {root_id, exponent_index}; }
    bool operator==(const CoinChainHandle&) const = default;
};

/// Coin (x_{i,j}, c_i, j), 1 <= j <= n.
struct ChainCoin {
    BigInt value;
    BigInt exponent;
    std::uint32_t exponent_index = 0;
    std::uint32_t position = 0;
    std::string root_id;

    ChainKey key() const { return {root_id, exponent_index}; }
    bool operator==(const ChainCoin&) const = default;
};

struct MintS2Result {
    std::string root_id;
    BigInt root;
    std::vector<CoinChainHandle> chains;
    OpCounter cost;
};

/// Mints one chain of length n per public exponent from a fresh X_N.
MintS2Result mint_chains_s2(Bank& bank, std::uint32_t length, SeededStream& rng,
                            const CoinTags& tags = {});
MintS2Result mint_chains_s2_from_start(Bank& bank, const BigInt& start, std::uint32_t length,
                                       std::size_t count, const CoinTags& tags = {});

/// Customer-side spending state for one chain.
class CustomerChain {
public:
    CustomerChain(CoinChainHandle handle, BigInt modulus);

    /// Next coin (positions 1..n in order). Throws Errc::chain_exhausted.
    ChainCoin pay_next_coin();
    /// Coin at an arbitrary position, without advancing.
    ChainCoin coin_at(std::uint32_t position) const;

    const CoinChainHandle& handle() const noexcept { return handle_; }
    std::uint32_t next_position() const noexcept { return next_; }
    std::uint32_t remaining() const noexcept { return handle_.length + 1 - next_; }
    void set_next_position(std::uint32_t next);

private:
    CoinChainHandle handle_;
    BigInt modulus_;
    // values_[j] = x_{i,j}; filled on construction by n forward hashes.
    std::vector<BigInt> values_;
    std::uint32_t next_ = 1;
};

enum class GapPolicy { strict, bridge };

/// First coin: one modexp to the listed root plus unused-chain lookup.
/// Later coins: one modexp to the previous coin. With GapPolicy::bridge a
/// forward jump of d positions costs d modexps; strict rejects it.
Outcome verify_chain_coin(const ChainCoin& coin, const std::optional<ChainCoin>& previous,
                          const PublicParams& params, const RegistryS2& registry, OpCounter& counter,
                          GapPolicy policy = GapPolicy::strict);

/// Vendor-side sessions, one per chain; the first coin claims the chain at the bank.
struct VendorS2 {
    std::string name;
    GapPolicy policy = GapPolicy::strict;
    std::map<ChainKey, ChainCoin> latest;

    Outcome receive(const ChainCoin& coin, Bank& bank, OpCounter& counter);
    Outcome receive(const ChainCoin& coin, Bank& bank);
};

/// Marks a chain as started by `vendor`. double_spent if it is not unused.
Outcome claim_chain(Bank& bank, const ChainKey& key, const std::string& vendor);

struct RedeemResult {
    Outcome outcome = Outcome::invalid;
    std::uint64_t credited = 0;
    OpCounter cost;
};

/// Bank checks last^{c_i^j mod E} == X_0 (one modexp), then credits
/// j - previously redeemed. Positions at or below the recorded one are double_spent.
RedeemResult redeem_chain(Bank& bank, const ChainCoin& last_coin, const std::string& vendor);

}  // namespace mdhc
