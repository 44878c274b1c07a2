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

#include "mdhc/scheme_s1.hpp"

#include "mdhc/errors.hpp"

#include <set>

namespace mdhc {

namespace {

constexpr int kMaxStartAttempts = 64;

// Caller holds bank.mutex(). Returns nullopt when the start value yields
// colliding coins (possible only for tiny moduli).
std::optional<BatchS1> mint_locked(Bank& bank, const BigInt& start, std::size_t count,
                                   const CoinTags& tags) {
    const auto& params = bank.public_params();
    const auto& trapdoor = bank.trapdoor();
    const BigInt& M = params.modulus;
    const BigInt& E = trapdoor.totient;

    if (count < 1 || count > params.exponents.size()) {
        throw Error(Errc::invalid_argument, "batch size must be between 1 and " +
                                                std::to_string(params.exponents.size()));
    }
    if (start < 2 || start > M - 2 || gcd(start, M) != 1) {
        throw Error(Errc::invalid_argument, "starting value must be a unit in [2, M-2]");
    }

    BatchS1 batch;
    std::vector<std::uint32_t> ones(count, 1);
    BigInt product = reduced_exponent(params.exponents, ones, E, batch.cost);
    ++batch.cost.modexp;
    batch.root = mod_pow(start, product, M);

    std::set<BigInt> values{batch.root};
    for (std::size_t i = 0; i < count; ++i) {
        CoinS1 coin;
        coin.exponent = params.exponents[i];
        coin.exponent_index = static_cast<std::uint32_t>(i);
        BigInt exponent = product * mod_inv(coin.exponent, E) % E;
        ++batch.cost.modmul;
        ++batch.cost.modexp;
        coin.value = mod_pow(start, exponent, M);
        coin.tags = tags;
        if (!values.insert(coin.value).second) {
            return std::nullopt;
        }
        batch.coins.push_back(std::move(coin));
    }

    batch.root_id = root_id_of(batch.root);
    if (bank.state().s1.roots.contains(batch.root_id)) {
        throw Error(Errc::invalid_argument, "root " + batch.root_id + " already published");
    }
    batch.batch_id = "s1-" + batch.root_id.substr(0, 12);
    MintS1Event event{batch.batch_id, batch.root_id, batch.root, {}, tags};
    for (auto& coin : batch.coins) {
        coin.root_id = batch.root_id;
        coin.batch_id = batch.batch_id;
        event.exponent_indices.push_back(coin.exponent_index);
    }
    bank.record(event);
    return batch;
}

BatchS1 mint_random_locked(Bank& bank, SeededStream& rng, std::size_t count, const CoinTags& tags) {
    for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
        BigInt start = random_start(bank.public_params().modulus, rng);
        if (auto batch = mint_locked(bank, start, count, tags)) {
            return *std::move(batch);
        }
    }
    throw Error(Errc::search_exhausted, "no starting value produced distinct coins");
}

}  // namespace

BatchS1 mint_batch_s1(Bank& bank, SeededStream& rng, const CoinTags& tags) {
    std::size_t m = bank.public_params().exponents.size();
    if (m < 2) {
        throw Error(Errc::invalid_argument, "S1 batches need at least two exponents");
    }
    std::scoped_lock lock(bank.mutex());
    return mint_random_locked(bank, rng, m, tags);
}

BatchS1 mint_batch_s1_from_start(Bank& bank, const BigInt& start, std::size_t count,
                                 const CoinTags& tags) {
    std::scoped_lock lock(bank.mutex());
    auto batch = mint_locked(bank, start, count, tags);
    if (!batch) {
        throw Error(Errc::invalid_argument, "starting value " + to_hex(start) + " yields colliding coins");
    }
    return *std::move(batch);
}

Outcome verify_coin_s1(const CoinS1& coin, const PublicParams& params, const RegistryS1& registry,
                       OpCounter& counter) {
    auto root = registry.roots.find(coin.root_id);
    if (root == registry.roots.end()) {
        return Outcome::unknown_root;
    }
    if (coin.exponent_index >= params.exponents.size() ||
        coin.exponent != params.exponents[coin.exponent_index]) {
        return Outcome::bad_exponent;
    }
    if (sgn(coin.value) <= 0 || coin.value >= params.modulus) {
        return Outcome::bad_value;
    }
    ++counter.modexp;
    return mod_pow(coin.value, coin.exponent, params.modulus) == root->second ? Outcome::accept
                                                                              : Outcome::bad_value;
}

Outcome verify_coin_s1(const CoinS1& coin, const PublicParams& params, const RegistryS1& registry) {
    OpCounter unused;
    return verify_coin_s1(coin, params, registry, unused);
}

Outcome check_unspent_online(Bank& bank, const CoinS1& coin) {
    std::scoped_lock lock(bank.mutex());
    const auto& s1 = bank.state().s1;
    CoinId id = coin.id();
    if (s1.unspent.contains(id)) return Outcome::accept;
    if (s1.deposited.contains(id) || s1.refunded.contains(id)) return Outcome::double_spent;
    return s1.roots.contains(id.root_id) ? Outcome::invalid : Outcome::unknown_root;
}

DepositResult deposit_coin_s1(Bank& bank, const CoinS1& coin, const std::string& vendor) {
    std::scoped_lock lock(bank.mutex());
    const auto& s1 = bank.state().s1;
    if (verify_coin_s1(coin, bank.public_params(), s1) != Outcome::accept) {
        return {Outcome::invalid, 0};
    }
    CoinId id = coin.id();
    if (s1.deposited.contains(id) || s1.refunded.contains(id)) {
        return {Outcome::double_spent, 0};
    }
    if (!s1.unspent.contains(id)) {
        return {Outcome::invalid, 0};
    }
    if (auto tags = s1.tags.find(id); tags != s1.tags.end() && tags->second.vendor_id &&
                                      *tags->second.vendor_id != vendor) {
        return {Outcome::wrong_vendor, 0};
    }
    bank.record(DepositS1Event{id, vendor});
    return {Outcome::credited, 1};
}

RefundResult refund_unspent(Bank& bank, const std::vector<CoinS1>& coins, SeededStream& rng,
                            const std::string& customer) {
    if (coins.empty()) {
        return {Outcome::accept, {}};
    }
    std::scoped_lock lock(bank.mutex());
    const auto& s1 = bank.state().s1;
    std::set<CoinId> requested;
    for (const auto& coin : coins) {
        if (verify_coin_s1(coin, bank.public_params(), s1) != Outcome::accept) {
            return {Outcome::invalid, {}};
        }
        CoinId id = coin.id();
        if (!requested.insert(id).second || s1.deposited.contains(id) || s1.refunded.contains(id)) {
            return {Outcome::double_spent, {}};
        }
        if (!s1.unspent.contains(id)) {
            return {Outcome::invalid, {}};
        }
    }
    bank.record(RefundS1Event{{requested.begin(), requested.end()}, customer});
    BatchS1 replacement = mint_random_locked(bank, rng, coins.size(), {});
    return {Outcome::accept, std::move(replacement.coins)};
}

Outcome VendorS1::accept_offline(const CoinS1& coin, const PublicParams& params, const RegistryS1& roots) {
    Outcome verdict = verify_coin_s1(coin, params, roots);
    if (verdict != Outcome::accept) {
        return verdict;
    }
    if (coin.tags.vendor_id && *coin.tags.vendor_id != name) {
        return Outcome::wrong_vendor;
    }
    if (!seen.insert(coin.id()).second) {
        return Outcome::double_spent;
    }
    return Outcome::accept;
}

}  // namespace mdhc
