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

#include "mdhc/scheme_s2.hpp"

#include "mdhc/errors.hpp"

#include <set>

namespace mdhc {

namespace {

constexpr int kMaxStartAttempts = 64;

std::optional<MintS2Result> mint_locked(Bank& bank, const BigInt& start, std::uint32_t length,
                                        std::size_t count, const CoinTags& tags) {
    const auto& params = bank.public_params();
    const BigInt& M = params.modulus;
    const BigInt& E = bank.trapdoor().totient;

    if (length < 1) {
        throw Error(Errc::invalid_argument, "chain length must be at least 1");
    }
    if (count < 1 || count > params.exponents.size()) {
        throw Error(Errc::invalid_argument, "chain count must be between 1 and " +
                                                std::to_string(params.exponents.size()));
    }
    if (start < 2 || start > M - 2 || gcd(start, M) != 1) {
        throw Error(Errc::invalid_argument, "starting value must be a unit in [2, M-2]");
    }

    MintS2Result result;
    std::vector<std::uint32_t> powers(count, length);
    // C = prod c_i^n mod E
    BigInt product = reduced_exponent(params.exponents, powers, E, result.cost);
    ++result.cost.modexp;
    result.root = mod_pow(start, product, M);
    result.root_id = root_id_of(result.root);

    std::set<BigInt> values{result.root};
    for (std::size_t i = 0; i < count; ++i) {
        const BigInt& c = params.exponents[i];
        BigInt inverse = mod_inv(c, E);
        BigInt exponent = product;
        for (std::uint32_t j = 0; j < length; ++j) {
            exponent = exponent * inverse % E;
            ++result.cost.modmul;
        }
        CoinChainHandle handle;
        ++result.cost.modexp;
        handle.start = mod_pow(start, exponent, M);
        handle.exponent = c;
        handle.exponent_index = static_cast<std::uint32_t>(i);
        handle.length = length;
        handle.root_id = result.root_id;
        handle.tags = tags;
        if (!values.insert(handle.start).second) {
            return std::nullopt;
        }
        result.chains.push_back(std::move(handle));
    }

    if (bank.state().s2.roots.contains(result.root_id)) {
        throw Error(Errc::invalid_argument, "root " + result.root_id + " already published");
    }
    MintS2Event event{result.root_id, result.root, length, {}, tags};
    for (const auto& chain : result.chains) {
        event.exponent_indices.push_back(chain.exponent_index);
    }
    bank.record(event);
    return result;
}

}  // namespace

MintS2Result mint_chains_s2(Bank& bank, std::uint32_t length, SeededStream& rng, const CoinTags& tags) {
    std::size_t m = bank.public_params().exponents.size();
    if (m < 2) {
        throw Error(Errc::invalid_argument, "S2 minting needs at least two exponents");
    }
    std::scoped_lock lock(bank.mutex());
    for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
        BigInt start = random_start(bank.public_params().modulus, rng);
        if (auto result = mint_locked(bank, start, length, m, tags)) {
            return *std::move(result);
        }
    }
    throw Error(Errc::search_exhausted, "no starting value produced distinct chains");
}

MintS2Result mint_chains_s2_from_start(Bank& bank, const BigInt& start, std::uint32_t length,
                                       std::size_t count, const CoinTags& tags) {
    std::scoped_lock lock(bank.mutex());
    auto result = mint_locked(bank, start, length, count, tags);
    if (!result) {
        throw Error(Errc::invalid_argument, "starting value " + to_hex(start) + " yields colliding chains");
    }
    return *std::move(result);
}

CustomerChain::CustomerChain(CoinChainHandle handle, BigInt modulus)
    : handle_(std::move(handle)), modulus_(std::move(modulus)) {
    if (handle_.length < 1) {
        throw Error(Errc::invalid_argument, "chain length must be at least 1");
    }
    values_.resize(std::size_t{handle_.length} + 1);
    values_[handle_.length] = handle_.start;
    for (std::uint32_t j = handle_.length; j > 0; --j) {
        values_[j - 1] = mod_pow(values_[j], handle_.exponent, modulus_);
    }
}

ChainCoin CustomerChain::coin_at(std::uint32_t position) const {
    if (position < 1 || position > handle_.length) {
        throw Error(Errc::out_of_range, "coin position " + std::to_string(position) + " outside 1.." +
                                            std::to_string(handle_.length));
    }
    return ChainCoin{values_[position], handle_.exponent, handle_.exponent_index, position,
                     handle_.root_id};
}

ChainCoin CustomerChain::pay_next_coin() {
    if (next_ > handle_.length) {
        throw Error(Errc::chain_exhausted, "all " + std::to_string(handle_.length) +
                                               " coins of the chain are spent");
    }
    return coin_at(next_++);
}

void CustomerChain::set_next_position(std::uint32_t next) {
    if (next < 1 || next > handle_.length + 1) {
        throw Error(Errc::out_of_range, "next position outside 1..n+1");
    }
    next_ = next;
}

Outcome verify_chain_coin(const ChainCoin& coin, const std::optional<ChainCoin>& previous,
                          const PublicParams& params, const RegistryS2& registry, OpCounter& counter,
                          GapPolicy policy) {
    auto root = registry.roots.find(coin.root_id);
    if (root == registry.roots.end()) {
        return Outcome::unknown_root;
    }
    if (coin.exponent_index >= params.exponents.size() ||
        coin.exponent != params.exponents[coin.exponent_index]) {
        return Outcome::bad_exponent;
    }
    auto info = registry.chains.find(coin.key());
    if (info == registry.chains.end() || coin.position < 1 || coin.position > info->second.length) {
        return Outcome::invalid;
    }
    if (sgn(coin.value) <= 0 || coin.value >= params.modulus) {
        return Outcome::bad_link;
    }

    BigInt target;
    std::uint32_t steps = 0;
    if (!previous) {
        // Another vendor already holds this chain.
        if (!registry.unused.contains(coin.key())) {
            return Outcome::double_spent;
        }
        if (coin.position != 1 && policy == GapPolicy::strict) {
            return Outcome::out_of_order;
        }
        target = root->second;
        steps = coin.position;
    } else {
        if (previous->key() != coin.key()) {
            return Outcome::invalid;
        }
        if (coin.position <= previous->position) {
            return Outcome::double_spent;
        }
        steps = coin.position - previous->position;
        if (steps > 1 && policy == GapPolicy::strict) {
            return Outcome::out_of_order;
        }
        target = previous->value;
    }

    BigInt value = coin.value;
    for (std::uint32_t s = 0; s < steps; ++s) {
        ++counter.modexp;
        value = mod_pow(value, coin.exponent, params.modulus);
    }
    if (value != target) {
        return Outcome::bad_link;
    }
    return Outcome::accept;
}

Outcome claim_chain(Bank& bank, const ChainKey& key, const std::string& vendor) {
    std::scoped_lock lock(bank.mutex());
    const auto& s2 = bank.state().s2;
    if (s2.unused.contains(key)) {
        bank.record(ClaimS2Event{key, vendor});
        return Outcome::accept;
    }
    return s2.chains.contains(key) ? Outcome::double_spent : Outcome::unknown_root;
}

Outcome VendorS2::receive(const ChainCoin& coin, Bank& bank, OpCounter& counter) {
    std::scoped_lock lock(bank.mutex());
    const auto& s2 = bank.state().s2;
    auto head = latest.find(coin.key());
    std::optional<ChainCoin> previous;
    if (head != latest.end()) {
        previous = head->second;
    }
    Outcome verdict = verify_chain_coin(coin, previous, bank.public_params(), s2, counter, policy);
    if (verdict != Outcome::accept) {
        return verdict;
    }
    if (!previous) {
        const auto& tags = s2.chains.at(coin.key()).tags;
        if (tags.vendor_id && *tags.vendor_id != name) {
            return Outcome::wrong_vendor;
        }
        bank.record(ClaimS2Event{coin.key(), name});
    }
    latest[coin.key()] = coin;
    return Outcome::accept;
}

Outcome VendorS2::receive(const ChainCoin& coin, Bank& bank) {
    OpCounter unused;
    return receive(coin, bank, unused);
}

RedeemResult redeem_chain(Bank& bank, const ChainCoin& last_coin, const std::string& vendor) {
    std::scoped_lock lock(bank.mutex());
    const auto& s2 = bank.state().s2;
    const auto& params = bank.public_params();
    RedeemResult result;

    auto root = s2.roots.find(last_coin.root_id);
    if (root == s2.roots.end()) {
        result.outcome = Outcome::unknown_root;
        return result;
    }
    if (last_coin.exponent_index >= params.exponents.size() ||
        last_coin.exponent != params.exponents[last_coin.exponent_index]) {
        result.outcome = Outcome::bad_exponent;
        return result;
    }
    auto info = s2.chains.find(last_coin.key());
    if (info == s2.chains.end() || last_coin.position < 1 || last_coin.position > info->second.length) {
        result.outcome = Outcome::invalid;
        return result;
    }
    // Same order as S1 deposits: validity, then spent, then vendor binding.
    std::vector<std::uint32_t> powers(last_coin.exponent_index + 1, 0);
    powers[last_coin.exponent_index] = last_coin.position;
    BigInt exponent = reduced_exponent(params.exponents, powers, bank.trapdoor().totient, result.cost);
    ++result.cost.modexp;
    if (sgn(last_coin.value) <= 0 || last_coin.value >= params.modulus ||
        mod_pow(last_coin.value, exponent, params.modulus) != root->second) {
        result.outcome = Outcome::bad_value;
        return result;
    }
    std::uint32_t previous = 0;
    if (auto it = s2.redeemed.find(last_coin.key()); it != s2.redeemed.end()) {
        previous = it->second;
    }
    if (last_coin.position <= previous) {
        result.outcome = Outcome::double_spent;
        return result;
    }
    if (info->second.tags.vendor_id && *info->second.tags.vendor_id != vendor) {
        result.outcome = Outcome::wrong_vendor;
        return result;
    }
    if (auto owner = s2.claimed_by.find(last_coin.key()); owner != s2.claimed_by.end() && owner->second != vendor) {
        result.outcome = Outcome::wrong_vendor;
        return result;
    }

    std::uint32_t credit = last_coin.position - previous;
    bank.record(RedeemS2Event{last_coin.key(), vendor, last_coin.position, credit});
    result.outcome = Outcome::credited;
    result.credited = credit;
    return result;
}

}  // namespace mdhc
