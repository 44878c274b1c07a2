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
#include "mdhc/chain.hpp"
#include "mdhc/numtheory.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mdhc {

/// Registry identity of a coin (S1) or a coin chain (S2): batch root plus exponent index.
struct CoinId {
    std::string root_id;
    std::uint32_t exponent_index = 0;

    auto operator<=>(const CoinId&) const = default;
};
using ChainKey = CoinId;

struct CoinTags {
    std::optional<std::string> vendor_id;
    std::optional<std::string> customer_id;

    bool operator==(const CoinTags&) const = default;
};

/// Digest of the canonical hex of a root value, 32 hex chars.
std::string root_id_of(const BigInt& root);

struct RegistryS1 {
    std::map<std::string, BigInt> roots;
    std::set<CoinId> unspent;
    std::set<CoinId> deposited;
    std::set<CoinId> refunded;
    std::map<CoinId, CoinTags> tags;

    bool operator==(const RegistryS1&) const = default;
};

struct ChainInfo {
    std::uint32_t length = 0;
    CoinTags tags;

    bool operator==(const ChainInfo&) const = default;
};

struct RegistryS2 {
    std::map<std::string, BigInt> roots;
    std::map<ChainKey, ChainInfo> chains;
    /// First coins of chains nobody has started spending.
    std::set<ChainKey> unused;
    /// Chain -> vendor that presented its first coin.
    std::map<ChainKey, std::string> claimed_by;
    /// Chain -> highest redeemed position j.
    std::map<ChainKey, std::uint32_t> redeemed;

    bool operator==(const RegistryS2&) const = default;
};

// Registry transitions. Live operations validate, then apply one of these;
// replaying a ledger applies the same records to an empty state.
struct MintS1Event {
    std::string batch_id;
    std::string root_id;
    BigInt root;
    std::vector<std::uint32_t> exponent_indices;
    CoinTags tags;
    bool operator==(const MintS1Event&) const = default;
};
struct DepositS1Event {
    CoinId coin;
    std::string vendor;
    bool operator==(const DepositS1Event&) const = default;
};
struct RefundS1Event {
    std::vector<CoinId> coins;
    std::string customer;
    bool operator==(const RefundS1Event&) const = default;
};
struct MintS2Event {
    std::string root_id;
    BigInt root;
    std::uint32_t length = 0;
    std::vector<std::uint32_t> exponent_indices;
    CoinTags tags;
    bool operator==(const MintS2Event&) const = default;
};
struct ClaimS2Event {
    ChainKey chain;
    std::string vendor;
    bool operator==(const ClaimS2Event&) const = default;
};
struct RedeemS2Event {
    ChainKey chain;
    std::string vendor;
    std::uint32_t position = 0;
    std::uint32_t credited = 0;
    bool operator==(const RedeemS2Event&) const = default;
};
struct SettleEvent {
    std::string commitment_id;
    std::string customer;
    std::map<std::string, std::uint64_t> credits;
    std::uint64_t debit = 0;
    bool operator==(const SettleEvent&) const = default;
};

using Event = std::variant<MintS1Event, DepositS1Event, RefundS1Event, MintS2Event, ClaimS2Event,
                           RedeemS2Event, SettleEvent>;

std::string_view event_name(const Event& event);

struct BankState {
    RegistryS1 s1;
    RegistryS2 s2;
    std::map<std::string, std::int64_t> balances;
    std::set<std::string> settled;

    bool operator==(const BankState&) const = default;
};

/// Applies a record without protocol checks; throws Errc::replay when the
/// record is inconsistent with the state (unknown coin, repeated mint, ...).
void apply_event(BankState& state, const Event& event);

/// The bank: trapdoor, public parameters and the double-spend state.
///
/// All mutating protocol steps take `mutex()` for the whole check-and-mark,
/// so each registry transition is atomic.
class Bank {
public:
    using Journal = std::function<void(const Event&)>;

    Bank(TrapdoorModulus trapdoor, ExponentSet exponents);

    const TrapdoorModulus& trapdoor() const noexcept { return trapdoor_; }
    const PublicParams& public_params() const noexcept { return public_; }

    void set_journal(Journal journal) { journal_ = std::move(journal); }
    /// Replaces the state wholesale (used after ledger replay).
    void restore(BankState state);

    std::mutex& mutex() const noexcept { return mutex_; }
    /// Caller must hold mutex().
    const BankState& state() const noexcept { return state_; }
    /// Caller must hold mutex(). Applies then journals.
    void record(const Event& event);

    BankState snapshot() const;
    std::int64_t balance(const std::string& account) const;

private:
    TrapdoorModulus trapdoor_;
    PublicParams public_;
    mutable std::mutex mutex_;
    BankState state_;
    Journal journal_;
};

}  // namespace mdhc
