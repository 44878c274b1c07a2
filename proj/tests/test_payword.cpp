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

#include "mdhc/payword.hpp"

#include <algorithm>

using namespace mdhc;
using testing::errc_of;

namespace {

struct Fixture {
    TrapdoorModulus modulus;
    PublicParams params;
    SignatureKeypair key;
    SignatureKeypair other_key;

    explicit Fixture(const std::string& label) {
        SeededStream rng(testing::seed_of(label));
        modulus = generate_modulus(toy_profile().prime_bits, rng);
        params = PublicParams{modulus.modulus, select_exponents(14, modulus)};
        key = generate_signature_keypair(512, rng);
        other_key = generate_signature_keypair(512, rng);
    }

    SecretChain chain(std::vector<std::uint32_t> sizes, const std::string& label) const {
        SeededStream rng(testing::seed_of(label));
        SecretChain c;
        c.params = params.chain(std::move(sizes));
        c.start = random_start(params.modulus, rng);
        return c;
    }
};

const Fixture& fixture() {
    static const Fixture f("payword");
    return f;
}

}  // namespace

TEST_SUITE("payword") {

TEST_CASE("positional values") {
    CHECK(value_of_index({9, 2}, NodeIndex({3, 7})) == 73);
    CHECK(value_of_index({9, 2}, NodeIndex({0, 0})) == 0);
    CHECK(value_of_index({1, 14}, NodeIndex(std::vector<std::uint32_t>(14, 1))) == 16383);
    CHECK(DenominationSchedule{1, 14}.capacity() == 16383);
    CHECK(index_of_value({9, 2}, 0) == NodeIndex({0, 0}));
    CHECK(index_of_value({1, 14}, 10000).k == oracle::digits(10000, 2, 14));
    CHECK(errc_of([] { index_of_value({9, 4}, 10000); }) == Errc::capacity_exceeded);
    CHECK(errc_of([] { value_of_index({9, 2}, NodeIndex({10, 0})); }) == Errc::out_of_range);
}

TEST_CASE("positional round trip is exhaustive for small lattices") {
    for (std::uint32_t n = 1; n <= 15; ++n) {
        for (std::size_t m = 1; m <= 12; ++m) {
            DenominationSchedule schedule{n, m};
            std::uint64_t count = 1;
            bool small = true;
            for (std::size_t i = 0; i < m && small; ++i) {
                count *= n + 1;
                small = count <= 4096;
            }
            if (!small) break;
            CHECK(schedule.capacity() == count - 1);
            for (std::uint64_t v = 0; v < count; ++v) {
                NodeIndex index = index_of_value(schedule, v);
                REQUIRE(index.k == oracle::digits(v, n + 1, m));
                REQUIRE(value_of_index(schedule, index) == v);
            }
        }
    }
}

TEST_CASE("signatures") {
    const auto& f = fixture();
    Bytes message{1, 2, 3, 4};
    Bytes signature = sign(f.key, message);
    CHECK(verify_signature(f.key.public_key, message, signature));
    Bytes flipped = message;
    flipped[0] ^= 1;
    CHECK_FALSE(verify_signature(f.key.public_key, flipped, signature));
    CHECK_FALSE(verify_signature(f.other_key.public_key, message, signature));
    SignaturePublicKey malformed{f.key.public_key.modulus, 2};
    CHECK(errc_of([&] { verify_signature(malformed, message, signature); }) == Errc::invalid_argument);
    SeededStream rng(testing::seed_of("small-key"));
    CHECK(errc_of([&] { generate_signature_keypair(128, rng); }) == Errc::invalid_argument);
}

TEST_CASE("commitments") {
    const auto& f = fixture();
    auto chain = f.chain({3, 3}, "commit");
    OpCounter counter;
    auto c = commit(f.key, "carol", chain, CommitmentPurpose::denomination, {}, counter);
    CHECK(counter.modexp == 6);
    OpCounter naive;
    CHECK(c.root == root_naive(chain, naive).value);
    CHECK(verify_commitment(c, f.key.public_key));
    CHECK_FALSE(verify_commitment(c, f.other_key.public_key));
    auto altered = c;
    altered.root ^= 1;
    CHECK_FALSE(verify_commitment(altered, f.key.public_key));
    auto renamed = c;
    renamed.customer = "mallory";
    CHECK_FALSE(verify_commitment(renamed, f.key.public_key));
    CHECK(errc_of([&] {
              commit(f.key, "dave", chain, CommitmentPurpose::multivendor, {"a"}, counter);
          }) == Errc::invalid_argument);
}

TEST_CASE("generating a capacity-16383 chain costs 14 modexps") {
    const auto& f = fixture();
    auto chain = f.chain(std::vector<std::uint32_t>(14, 1), "binary");
    OpCounter counter;
    auto c = commit(f.key, "carol", chain, CommitmentPurpose::denomination, {}, counter);
    CHECK(counter.modexp == 14);
    CHECK(DenominationSchedule{1, 14}.capacity() >= 10000);

    SecretChain linear = f.chain({10000}, "linear");
    OpCounter linear_counter;
    root_naive(linear, linear_counter);
    CHECK(linear_counter.modexp == 10000);
}

TEST_CASE("denominated payments with carries") {
    const auto& f = fixture();
    auto chain = f.chain({9, 9}, "decimal");
    OpCounter counter;
    auto c = commit(f.key, "carol", chain, CommitmentPurpose::denomination, {}, counter);
    SpendState state = initial_spend_state(2);

    Payword nine = pay_denominated(state, 9, chain, counter);
    CHECK(nine.node.index == NodeIndex({9, 0}));
    CHECK(nine.state.total == 9);
    Payword ten = pay_denominated(nine.state, 1, chain, counter);
    CHECK(ten.node.index == NodeIndex({0, 1}));
    CHECK(ten.state.total == 10);
    CHECK(errc_of([&] { verify_edge(c.params, ten.node, nine.node, 2); }) == Errc::not_adjacent);

    OpCounter verify_cost;
    CHECK(verify_denominated(c, ten.node, 10, verify_cost) == Outcome::accept);
    CHECK(verify_cost.modexp == 1);
    CHECK(verify_denominated(c, ten.node, 11, verify_cost) == Outcome::bad_total);
    Node forged = ten.node;
    forged.value = (forged.value + 1) % f.params.modulus;
    CHECK(verify_denominated(c, forged, 10, verify_cost) == Outcome::bad_link);

    Payword big = pay_denominated(ten.state, 63, chain, counter);
    CHECK(big.node.index == NodeIndex({3, 7}));
    CHECK(verify_denominated(c, big.node, 73, verify_cost) == Outcome::accept);
    CHECK(errc_of([&] { pay_denominated(big.state, 27, chain, counter); }) == Errc::capacity_exceeded);
    CHECK(errc_of([&] { pay_denominated(big.state, 0, chain, counter); }) == Errc::invalid_argument);

    auto binary = f.chain({1, 1, 1}, "unit");
    Payword one = pay_denominated(initial_spend_state(3), 1, binary, counter);
    CHECK(one.node.index == NodeIndex({1, 0, 0}));
}

TEST_CASE("denominated totals are strictly increasing") {
    const auto& f = fixture();
    auto chain = f.chain({4, 4, 4}, "monotone");
    OpCounter counter;
    auto c = commit(f.key, "carol", chain, CommitmentPurpose::denomination, {}, counter);
    SeededStream rng(testing::seed_of("amounts"));
    SpendState state = initial_spend_state(3);
    while (state.total < 120) {
        std::uint64_t amount = 1 + rng.below(std::min<std::uint64_t>(10, 124 - state.total)).get_ui();
        Payword word = pay_denominated(state, amount, chain, counter);
        CHECK(word.state.total == state.total + amount);
        CHECK(value_of_index({4, 3}, word.state.index) == word.state.total);
        CHECK(verify_denominated(c, word.node, word.state.total, counter) == Outcome::accept);
        state = word.state;
    }
}

TEST_CASE("multivendor payments and settlement") {
    const auto& f = fixture();
    auto chain = f.chain({3, 3, 3}, "vendors");
    OpCounter counter;
    auto c = commit(f.key, "dave", chain, CommitmentPurpose::multivendor, {"v1", "v2", "v3"}, counter);
    SpendState state = initial_spend_state(3);

    Payword first_v2 = pay_vendor(state, 2, "v2", chain, c, counter);
    CHECK(first_v2.node.index == NodeIndex({0, 1, 0}));

    Payword p1 = pay_vendor(state, 1, "v1", chain, c, counter);
    Payword p2 = pay_vendor(p1.state, 2, "v2", chain, c, counter);
    Payword p3 = pay_vendor(p2.state, 1, "v1", chain, c, counter);
    CHECK(p3.state.index == NodeIndex({2, 1, 0}));
    CHECK(errc_of([&] { pay_vendor(p3.state, 1, "v2", chain, c, counter); }) == Errc::dimension_unbound);

    PaywordVerifier v1(c);
    OpCounter cost;
    CHECK(v1.verify(p1.node, cost) == Outcome::accept);
    CHECK(cost.modexp == 1);
    cost = {};
    CHECK(v1.verify(p3.node, cost) == Outcome::accept);
    CHECK(cost.modexp == 2);  // down to the cached (1,0,0) node: one step in each of two dimensions

    std::vector<Deposit> deposits{{"v1", p3.node}, {"v2", p2.node}};
    Settlement s = settle_multivendor(c, deposits, counter);
    CHECK(s.outcome == Outcome::settled);
    CHECK(s.settled_index == NodeIndex({2, 1, 0}));
    CHECK(s.credits.at("v1") == 2);
    CHECK(s.credits.at("v2") == 1);
    CHECK(s.credits.at("v3") == 0);
    CHECK(s.debit == 3);

    std::vector<Deposit> mixed{{"v1", p1.node}, {"v2", first_v2.node}};
    CHECK(settle_multivendor(c, mixed, counter).outcome == Outcome::inconsistent);

    Node forged = p3.node;
    forged.value = (forged.value + 1) % f.params.modulus;
    std::vector<Deposit> bad{{"v1", forged}};
    CHECK(settle_multivendor(c, bad, counter).outcome == Outcome::invalid);

    Payword last = p3;
    for (int i = 0; i < 1; ++i) last = pay_vendor(last.state, 1, "v1", chain, c, counter);
    CHECK(errc_of([&] { pay_vendor(last.state, 1, "v1", chain, c, counter); }) == Errc::chain_exhausted);
}

TEST_CASE("bank settlement books credits and debits once") {
    const auto& f = fixture();
    Bank bank(f.modulus, f.params.exponents);
    auto chain = f.chain({3, 3, 3}, "bank-settle");
    OpCounter counter;
    auto c = commit(f.key, "dave", chain, CommitmentPurpose::multivendor, {"v1", "v2", "v3"}, counter);
    Payword p1 = pay_vendor(initial_spend_state(3), 1, "v1", chain, c, counter);
    Payword p2 = pay_vendor(p1.state, 2, "v2", chain, c, counter);
    Payword p3 = pay_vendor(p2.state, 1, "v1", chain, c, counter);
    std::vector<Deposit> deposits{{"v1", p3.node}, {"v2", p2.node}};
    CHECK(settle_multivendor(bank, c, f.other_key.public_key, deposits).outcome == Outcome::bad_signature);
    Settlement s = settle_multivendor(bank, c, f.key.public_key, deposits);
    CHECK(s.outcome == Outcome::settled);
    CHECK(bank.balance("v1") == 2);
    CHECK(bank.balance("v2") == 1);
    CHECK(bank.balance("dave") == -3);
    CHECK(settle_multivendor(bank, c, f.key.public_key, deposits).outcome == Outcome::double_spent);
    std::int64_t sum = 0;
    for (const auto& [name, balance] : bank.snapshot().balances) sum += balance;
    CHECK(sum == 0);
}

TEST_CASE("single vendor settlement equals linear payword redemption") {
    const auto& f = fixture();
    auto chain = f.chain({20}, "single");
    OpCounter counter;
    auto c = commit(f.key, "erin", chain, CommitmentPurpose::multivendor, {"solo"}, counter);
    SpendState state = initial_spend_state(1);
    Payword word;
    for (int i = 0; i < 13; ++i) {
        word = pay_vendor(state, 1, "solo", chain, c, counter);
        state = word.state;
    }
    std::vector<Deposit> deposits{{"solo", word.node}};
    Settlement s = settle_multivendor(c, deposits, counter);
    auto linear = linear_payword_amount(c.root, word.node.value, 13, c.params.exponents[0], c.params.modulus);
    REQUIRE(linear.has_value());
    CHECK(s.credits.at("solo") == *linear);
    CHECK(s.debit == 13);
    CHECK_FALSE(linear_payword_amount(c.root, word.node.value, 12, c.params.exponents[0], c.params.modulus));
}

TEST_CASE("bank redemption of a denominated payword") {
    const auto& f = fixture();
    Bank bank(f.modulus, f.params.exponents);
    auto chain = f.chain({9, 9}, "bank-decimal");
    OpCounter counter;
    auto c = commit(f.key, "carol", chain, CommitmentPurpose::denomination, {}, counter);
    Payword nine = pay_denominated(initial_spend_state(2), 9, chain, counter);
    Payword ten = pay_denominated(nine.state, 1, chain, counter);
    Settlement s = redeem_denominated(bank, c, f.key.public_key, "store", ten.node, 10);
    CHECK(s.outcome == Outcome::credited);
    CHECK(s.debit == 10);
    CHECK(bank.balance("store") == 10);
    CHECK(redeem_denominated(bank, c, f.key.public_key, "store", ten.node, 10).outcome == Outcome::double_spent);
}

}  // TEST_SUITE
