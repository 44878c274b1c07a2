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

#include <string>
#include <vector>

namespace mdhc {

/// An S1 coin (X_i, c_i): X_i^{c_i} mod M is the batch root.
struct CoinS1 {
    BigInt value;
    BigInt exponent;
    std::uint32_t exponent_index = 0;
    std::string root_id;
    std::string batch_id;
    CoinTags tags;

    CoinId id() const { return {root_id, exponent_index}; }
    bool operator==(const CoinS1&) const = default;
};

struct BatchS1 {
    std::string batch_id;
    std::string root_id;
    BigInt root;
    std::vector<CoinS1> coins;
    OpCounter cost;

    bool operator==(const BatchS1&) const = default;
};

/// Mints m = |exponents| coins from a fresh X_N drawn from `rng`.
BatchS1 mint_batch_s1(Bank& bank, SeededStream& rng, const CoinTags& tags = {});

/// Mints from an explicit X_N using the first `count` exponents. Rejects
/// X_N outside [2, M-2], non-units, and starts whose coins collide.
BatchS1 mint_batch_s1_from_start(Bank& bank, const BigInt& start, std::size_t count,
                                 const CoinTags& tags = {});

/// One modexp, then root-list lookup. Returns accept, unknown_root,
/// bad_exponent or bad_value.
Outcome verify_coin_s1(const CoinS1& coin, const PublicParams& params, const RegistryS1& registry,
                       OpCounter& counter);
Outcome verify_coin_s1(const CoinS1& coin, const PublicParams& params, const RegistryS1& registry);

struct DepositResult {
    Outcome outcome = Outcome::invalid;
    std::uint64_t credited = 0;
};

/// Verifies and moves the coin unspent -> deposited, crediting `vendor` one unit.
/// A second deposit yields double_spent; forged coins yield invalid.
DepositResult deposit_coin_s1(Bank& bank, const CoinS1& coin, const std::string& vendor);

struct RefundResult {
    Outcome outcome = Outcome::invalid;
    std::vector<CoinS1> replacement;
};

/// Exchanges unspent coins for a fresh batch of the same size. All-or-nothing:
/// any deposited or refunded coin rejects the whole request as double_spent.
RefundResult refund_unspent(Bank& bank, const std::vector<CoinS1>& coins, SeededStream& rng,
                            const std::string& customer = {});

/// On-line double-spend check against the bank's unspent list (read-only).
Outcome check_unspent_online(Bank& bank, const CoinS1& coin);

/// Vendor-side state for off-line acceptance of vendor-specific coins.
struct VendorS1 {
    std::string name;
    std::set<CoinId> seen;

    /// Verifies against the root list, checks the vendor tag, and for tagged
    /// coins checks the local received list instead of asking the bank.
    Outcome accept_offline(const CoinS1& coin, const PublicParams& params, const RegistryS1& roots);
};

}  // namespace mdhc
