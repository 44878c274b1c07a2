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

#include "mdhc/bank.hpp"

#include "mdhc/errors.hpp"

namespace mdhc {

namespace {

std::string coin_text(const CoinId& id) {
    return id.root_id + ":" + std::to_string(id.exponent_index);
}

[[noreturn]] void fail(const std::string& why) {
    throw Error(Errc::replay, why);
}

template <class... F>
struct Overloaded : F... {
    using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

}  // namespace

std::string root_id_of(const BigInt& root) {
    return bytes_to_hex(sha256("mdhc-root:" + to_hex(root))).substr(0, 32);
}

std::string_view event_name(const Event& event) {
    return std::visit(Overloaded{
                          [](const MintS1Event&) { return std::string_view("mint_s1"); },
                          [](const DepositS1Event&) { return std::string_view("deposit_s1"); },
                          [](const RefundS1Event&) { return std::string_view("refund_s1"); },
                          [](const MintS2Event&) { return std::string_view("mint_s2"); },
                          [](const ClaimS2Event&) { return std::string_view("claim_s2"); },
                          [](const RedeemS2Event&) { return std::string_view("redeem_s2"); },
                          [](const SettleEvent&) { return std::string_view("settle"); },
                      },
                      event);
}

void apply_event(BankState& state, const Event& event) {
    std::visit(
        Overloaded{
            [&](const MintS1Event& e) {
                if (state.s1.roots.contains(e.root_id)) fail("S1 root " + e.root_id + " already published");
                if (root_id_of(e.root) != e.root_id) fail("S1 root id does not match root value");
                state.s1.roots.emplace(e.root_id, e.root);
                for (auto idx : e.exponent_indices) {
                    CoinId id{e.root_id, idx};
                    state.s1.unspent.insert(id);
                    if (e.tags != CoinTags{}) state.s1.tags.emplace(id, e.tags);
                }
            },
            [&](const DepositS1Event& e) {
                if (state.s1.unspent.erase(e.coin) == 0) fail("coin " + coin_text(e.coin) + " is not unspent");
                state.s1.deposited.insert(e.coin);
                state.balances[e.vendor] += 1;
            },
            [&](const RefundS1Event& e) {
                for (const auto& id : e.coins) {
                    if (!state.s1.unspent.contains(id)) fail("coin " + coin_text(id) + " is not unspent");
                }
                for (const auto& id : e.coins) {
                    state.s1.unspent.erase(id);
                    state.s1.refunded.insert(id);
                }
            },
            [&](const MintS2Event& e) {
                if (state.s2.roots.contains(e.root_id)) fail("S2 root " + e.root_id + " already published");
                if (root_id_of(e.root) != e.root_id) fail("S2 root id does not match root value");
                if (e.length == 0) fail("S2 chain length must be positive");
                state.s2.roots.emplace(e.root_id, e.root);
                for (auto idx : e.exponent_indices) {
                    ChainKey key{e.root_id, idx};
                    state.s2.chains[key] = ChainInfo{e.length, e.tags};
                    state.s2.unused.insert(key);
                }
            },
            [&](const ClaimS2Event& e) {
                if (state.s2.unused.erase(e.chain) == 0) fail("chain " + coin_text(e.chain) + " is not unused");
                state.s2.claimed_by[e.chain] = e.vendor;
            },
            [&](const RedeemS2Event& e) {
                auto info = state.s2.chains.find(e.chain);
                if (info == state.s2.chains.end()) fail("unknown chain " + coin_text(e.chain));
                std::uint32_t previous = 0;
                if (auto it = state.s2.redeemed.find(e.chain); it != state.s2.redeemed.end()) {
                    previous = it->second;
                }
                if (e.position <= previous || e.position > info->second.length) {
                    fail("chain " + coin_text(e.chain) + " position " + std::to_string(e.position) +
                         " not redeemable");
                }
                if (e.credited != e.position - previous) fail("redeem credit does not match positions");
                if (state.s2.unused.erase(e.chain) > 0) {
                    state.s2.claimed_by[e.chain] = e.vendor;
                }
                state.s2.redeemed[e.chain] = e.position;
                state.balances[e.vendor] += e.credited;
            },
            [&](const SettleEvent& e) {
                if (!state.settled.insert(e.commitment_id).second) {
                    fail("commitment " + e.commitment_id + " already settled");
                }
                std::uint64_t total = 0;
                for (const auto& [vendor, amount] : e.credits) {
                    state.balances[vendor] += static_cast<std::int64_t>(amount);
                    total += amount;
                }
                if (total != e.debit) fail("settlement credits do not sum to the debit");
                state.balances[e.customer] -= static_cast<std::int64_t>(e.debit);
            },
        },
        event);
}

Bank::Bank(TrapdoorModulus trapdoor, ExponentSet exponents) : trapdoor_(std::move(trapdoor)) {
    validate_exponents(exponents, trapdoor_.totient);
    public_.modulus = trapdoor_.modulus;
    public_.exponents = std::move(exponents);
}

void Bank::restore(BankState state) {
    std::scoped_lock lock(mutex_);
    state_ = std::move(state);
}

void Bank::record(const Event& event) {
    apply_event(state_, event);
    if (journal_) {
        journal_(event);
    }
}

BankState Bank::snapshot() const {
    std::scoped_lock lock(mutex_);
    return state_;
}

std::int64_t Bank::balance(const std::string& account) const {
    std::scoped_lock lock(mutex_);
    auto it = state_.balances.find(account);
    return it == state_.balances.end() ? 0 : it->second;
}

}  // namespace mdhc
