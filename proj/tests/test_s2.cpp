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

#include "helpers.hpp"
#include "oracles.hpp"

#include "mdhc/scheme_s1.hpp"
#include "mdhc/scheme_s2.hpp"

using namespace mdhc;
using testing::errc_of;

namespace {

Bank toy_bank(const std::string& label, std::size_t m = 4) {
    SeededStream rng(testing::seed_of(label));
    auto modulus = generate_modulus(toy_profile().prime_bits, rng);
    return Bank(modulus, select_exponents(m, modulus));
}

}  // namespace

TEST_SUITE("scheme_s2") {

TEST_CASE("fixture chains") {
    Bank bank(testing::fixture_modulus(), testing::fixture_exponents(2));
    MintS2Result minted = mint_chains_s2_from_start(bank, 123, 2, 2);
    CHECK(minted.root == oracle::modpow_u64(123, 225 % 1012, 1081));
    std::int64_t inv9 = oracle::inverse_i64(9, 1012);
    REQUIRE(inv9 != 0);
    CHECK(minted.chains[0].start == oracle::modpow_u64(123, (225 * inv9) % 1012, 1081));
    for (const auto& handle : minted.chains) {
        BigInt x = handle.start;
        for (std::uint32_t j = 0; j < handle.length; ++j) x = mod_pow(x, handle.exponent, 1081);
        CHECK(x == minted.root);
        CustomerChain chain(handle, 1081);
        CHECK(mod_pow(chain.coin_at(1).value, handle.exponent, 1081) == minted.root);
    }
}

TEST_CASE("mint cost and registry size do not depend on n") {
    for (std::uint32_t n : {1u, 5u, 50u, 500u}) {
        Bank bank = toy_bank("s2-cost");
        SeededStream rng(testing::seed_of("s2-cost-mint"));
        MintS2Result minted = mint_chains_s2(bank, n, rng);
        CHECK(minted.cost.modexp == 5);
        CHECK(bank.state().s2.unused.size() == 4);
        CHECK(bank.state().s2.chains.size() == 4);
    }
    Bank bank = toy_bank("s2-cost");
    SeededStream rng(testing::seed_of("s2-cost-mint"));
    CHECK(errc_of([&] { mint_chains_s2(bank, 0, rng); }) == Errc::invalid_argument);
}

TEST_CASE("customer chain emits positions 1..n then exhausts") {
    Bank bank = toy_bank("s2-customer");
    SeededStream rng(testing::seed_of("s2-customer-mint"));
    MintS2Result minted = mint_chains_s2(bank, 6, rng);
    CustomerChain chain(minted.chains[0], bank.public_params().modulus);
    const BigInt& M = bank.public_params().modulus;
    BigInt previous = minted.root;
    for (std::uint32_t j = 1; j <= 6; ++j) {
        ChainCoin coin = chain.pay_next_coin();
        CHECK(coin.position == j);
        CHECK(mod_pow(coin.value, coin.exponent, M) == previous);
        previous = coin.value;
    }
    CHECK(previous == minted.chains[0].start);
    CHECK(chain.remaining() == 0);
    CHECK(errc_of([&] { chain.pay_next_coin(); }) == Errc::chain_exhausted);
}

TEST_CASE("vendor verification costs one modexp per coin") {
    Bank bank = toy_bank("s2-vendor");
    SeededStream rng(testing::seed_of("s2-vendor-mint"));
    MintS2Result minted = mint_chains_s2(bank, 10, rng);
    CustomerChain chain(minted.chains[1], bank.public_params().modulus);
    VendorS2 vendor{"cafe", GapPolicy::strict, {}};
    ChainCoin last;
    for (int j = 0; j < 10; ++j) {
        OpCounter counter;
        last = chain.pay_next_coin();
        CHECK(vendor.receive(last, bank, counter) == Outcome::accept);
        CHECK(counter.modexp == 1);
    }
    CHECK(bank.state().s2.claimed_by.at(last.key()) == "cafe");
    RedeemResult r = redeem_chain(bank, last, "cafe");
    CHECK(r.outcome == Outcome::credited);
    CHECK(r.credited == 10);
    CHECK(r.cost.modexp == 1);
    CHECK(redeem_chain(bank, last, "cafe").outcome == Outcome::double_spent);
}

TEST_CASE("rejections") {
    Bank bank = toy_bank("s2-reject");
    SeededStream rng(testing::seed_of("s2-reject-mint"));
    MintS2Result minted = mint_chains_s2(bank, 8, rng);
    const auto& params = bank.public_params();
    CustomerChain chain(minted.chains[0], params.modulus);
    OpCounter counter;

    ChainCoin first = chain.coin_at(1);
    ChainCoin tampered = first;
    tampered.value = (tampered.value + 1) % params.modulus;
    CHECK(verify_chain_coin(tampered, std::nullopt, params, bank.state().s2, counter) == Outcome::bad_link);

    ChainCoin third = chain.coin_at(3);
    CHECK(verify_chain_coin(third, std::nullopt, params, bank.state().s2, counter) == Outcome::out_of_order);
    CHECK(verify_chain_coin(third, std::nullopt, params, bank.state().s2, counter, GapPolicy::bridge) ==
          Outcome::accept);
    CHECK(verify_chain_coin(third, first, params, bank.state().s2, counter) == Outcome::out_of_order);
    CHECK(verify_chain_coin(third, first, params, bank.state().s2, counter, GapPolicy::bridge) == Outcome::accept);
    CHECK(verify_chain_coin(first, third, params, bank.state().s2, counter) == Outcome::double_spent);

    VendorS2 cafe{"cafe", GapPolicy::strict, {}};
    CHECK(cafe.receive(first, bank) == Outcome::accept);
    VendorS2 diner{"diner", GapPolicy::strict, {}};
    CHECK(diner.receive(first, bank) == Outcome::double_spent);
    CHECK(redeem_chain(bank, first, "diner").outcome == Outcome::wrong_vendor);

    ChainCoin unknown = first;
    unknown.root_id = "00";
    CHECK(verify_chain_coin(unknown, std::nullopt, params, bank.state().s2, counter) == Outcome::unknown_root);

    // Forged last coin leaves the registry unchanged.
    ChainCoin forged = chain.coin_at(5);
    forged.value = (forged.value * 2) % params.modulus;
    auto before = bank.snapshot();
    CHECK(redeem_chain(bank, forged, "cafe").outcome == Outcome::bad_value);
    CHECK(bank.snapshot() == before);
}

TEST_CASE("incremental redemption") {
    Bank bank = toy_bank("s2-incremental");
    SeededStream rng(testing::seed_of("s2-incremental-mint"));
    MintS2Result minted = mint_chains_s2(bank, 10, rng);
    CustomerChain chain(minted.chains[2], bank.public_params().modulus);
    CHECK(redeem_chain(bank, chain.coin_at(4), "cafe").credited == 4);
    CHECK(redeem_chain(bank, chain.coin_at(7), "cafe").credited == 3);
    CHECK(redeem_chain(bank, chain.coin_at(7), "cafe").outcome == Outcome::double_spent);
    CHECK(redeem_chain(bank, chain.coin_at(2), "cafe").outcome == Outcome::double_spent);
    CHECK(bank.balance("cafe") == 7);
    VendorS2 diner{"diner", GapPolicy::strict, {}};
    CHECK(diner.receive(chain.coin_at(1), bank) == Outcome::double_spent);

    // Already-credited positions are double spends whoever presents them; later ones belong to the claimant.
    CHECK(redeem_chain(bank, chain.coin_at(7), "diner").outcome == Outcome::double_spent);
    CHECK(redeem_chain(bank, chain.coin_at(8), "diner").outcome == Outcome::wrong_vendor);
    ChainCoin forged = chain.coin_at(3);
    forged.value = (forged.value + 1) % bank.public_params().modulus;
    CHECK(redeem_chain(bank, forged, "cafe").outcome == Outcome::bad_value);
    CHECK(bank.balance("cafe") == 7);
}

TEST_CASE("vendor-tagged chains") {
    Bank bank = toy_bank("s2-tags");
    SeededStream rng(testing::seed_of("s2-tags-mint"));
    MintS2Result minted = mint_chains_s2(bank, 3, rng, CoinTags{"cafe", "bob"});
    CustomerChain chain(minted.chains[0], bank.public_params().modulus);
    VendorS2 diner{"diner", GapPolicy::strict, {}};
    CHECK(diner.receive(chain.coin_at(1), bank) == Outcome::wrong_vendor);
    CHECK(bank.state().s2.unused.contains(chain.handle().key()));
    CHECK(redeem_chain(bank, chain.coin_at(3), "diner").outcome == Outcome::wrong_vendor);
    CHECK(redeem_chain(bank, chain.coin_at(3), "cafe").credited == 3);
}

TEST_CASE("chain interior links exhaustively") {
    Bank bank = toy_bank("s2-interior");
    SeededStream rng(testing::seed_of("s2-interior-mint"));
    MintS2Result minted = mint_chains_s2(bank, 25, rng);
    const BigInt& M = bank.public_params().modulus;
    for (const auto& handle : minted.chains) {
        CustomerChain chain(handle, M);
        CHECK(mod_pow(chain.coin_at(1).value, handle.exponent, M) == minted.root);
        for (std::uint32_t j = 1; j < handle.length; ++j) {
            CHECK(mod_pow(chain.coin_at(j + 1).value, handle.exponent, M) == chain.coin_at(j).value);
        }
        CHECK(chain.coin_at(handle.length).value == handle.start);
    }
}

TEST_CASE("n = 1 chains coincide with an S1 batch") {
    Bank s1_bank = toy_bank("s2-degenerate");
    Bank s2_bank = toy_bank("s2-degenerate");
    BigInt start = 4242;
    BatchS1 batch = mint_batch_s1_from_start(s1_bank, start, 4);
    MintS2Result chains = mint_chains_s2_from_start(s2_bank, start, 1, 4);
    CHECK(batch.root == chains.root);
    CHECK(batch.root_id == chains.root_id);
    CHECK(batch.cost.modexp == chains.cost.modexp);
    for (std::size_t i = 0; i < 4; ++i) {
        CustomerChain chain(chains.chains[i], s2_bank.public_params().modulus);
        ChainCoin coin = chain.pay_next_coin();
        CHECK(coin.value == batch.coins[i].value);
        CHECK(coin.exponent == batch.coins[i].exponent);
        VendorS2 vendor{"shop", GapPolicy::strict, {}};
        CHECK(vendor.receive(coin, s2_bank) == Outcome::accept);
        CHECK(verify_coin_s1(batch.coins[i], s1_bank.public_params(), s1_bank.state().s1) == Outcome::accept);
        RedeemResult r2 = redeem_chain(s2_bank, coin, "shop");
        DepositResult r1 = deposit_coin_s1(s1_bank, batch.coins[i], "shop");
        CHECK(r1.credited == r2.credited);
        CHECK(redeem_chain(s2_bank, coin, "shop").outcome == deposit_coin_s1(s1_bank, batch.coins[i], "shop").outcome);
    }
    CHECK(s1_bank.balance("shop") == s2_bank.balance("shop"));
}

}  // TEST_SUITE
