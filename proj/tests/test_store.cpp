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

#include "mdhc/payword.hpp"
#include "mdhc/scheme_s1.hpp"
#include "mdhc/scheme_s2.hpp"
#include "mdhc/store.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace mdhc;
using testing::errc_of;

namespace {

namespace fs = std::filesystem;

bool updating() {
    const char* flag = std::getenv("MDHC_UPDATE_GOLDEN");
    return flag && std::string(flag) == "1";
}

// One deterministic instance of every persisted type.
struct Objects {
    TrapdoorModulus modulus = testing::fixture_modulus();
    Bank bank{modulus, testing::fixture_exponents(3)};
    BatchS1 batch;
    MintS2Result chains;
    SecretChain chain = testing::fixture_chain({2, 1, 1});
    SignatureKeypair key;
    PaywordCommitment commitment;
    Payword word;

    Objects() {
        batch = mint_batch_s1_from_start(bank, 123, 3, CoinTags{std::nullopt, "alice"});
        chains = mint_chains_s2_from_start(bank, 456, 4, 3, CoinTags{"cafe", "bob"});
        deposit_coin_s1(bank, batch.coins[0], "shop");
        CustomerChain customer(chains.chains[0], modulus.modulus);
        redeem_chain(bank, customer.coin_at(2), "cafe");
        SeededStream rng(testing::seed_of("golden-key"));
        key = generate_signature_keypair(512, rng);
        OpCounter counter;
        SecretChain public_chain = chain;
        public_chain.trapdoor.reset();
        commitment = commit(key, "dave", public_chain, CommitmentPurpose::multivendor, {"v1", "v2", "v3"}, counter);
        word = pay_vendor(initial_spend_state(3), 2, "v2", public_chain, commitment, counter);
    }

    CustomerWallet customer_wallet() const {
        return CustomerWallet{"alice", {batch.coins[1], batch.coins[2]}, {ChainSpend{chains.chains[1], 3}}};
    }
    VendorWallet vendor_wallet() const {
        CustomerChain customer(chains.chains[0], modulus.modulus);
        return VendorWallet{"cafe", {batch.coins[0]}, {customer.coin_at(2)}, {{chains.root_id + "/0", 2}}};
    }
    Payment payment() const {
        CustomerChain customer(chains.chains[2], modulus.modulus);
        return Payment{"bob", "cafe", customer.coin_at(1)};
    }
};

const Objects& objects() {
    static const Objects o;
    return o;
}

template <class T>
void check_golden(const std::string& file, const T& value) {
    fs::path path = fs::path(MDHC_GOLDEN_DIR) / file;
    std::string text = encode(value);
    if (updating()) write_file(path, text);
    REQUIRE_MESSAGE(fs::exists(path), path.string());
    std::string golden = read_file(path);
    CHECK_MESSAGE(text == golden, file);
    T decoded = decode<T>(golden);
    CHECK(decoded == value);
    CHECK(encode(decoded) == golden);
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    auto pos = text.find(from);
    REQUIRE_MESSAGE(pos != std::string::npos, from);
    return text.replace(pos, from.size(), to);
}

std::string format_error(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        CHECK(e.code() == Errc::format);
        return e.what();
    }
    FAIL("expected a format error");
    return {};
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("golden files round trip byte for byte") {
    const auto& o = objects();
    check_golden("trapdoor_modulus.json", o.modulus);
    check_golden("public_params.json", o.bank.public_params());
    check_golden("chain_params.json", o.chain.params);
    check_golden("secret_chain.json", o.chain);
    check_golden("node.json", o.word.node);
    check_golden("coin_s1.json", o.batch.coins[0]);
    check_golden("batch_s1.json", o.batch);
    check_golden("chain_handle.json", o.chains.chains[0]);
    check_golden("chain_coin.json", std::get<ChainCoin>(o.payment().item));
    check_golden("payword_commitment.json", o.commitment);
    check_golden("signature_public_key.json", o.key.public_key);
    check_golden("signature_keypair.json", o.key);
    check_golden("spend_state.json", o.word.state);
    check_golden("registry_s1.json", o.bank.state().s1);
    check_golden("registry_s2.json", o.bank.state().s2);
    check_golden("bank_state.json", o.bank.snapshot());
    check_golden("customer_wallet.json", o.customer_wallet());
    check_golden("vendor_wallet.json", o.vendor_wallet());
    check_golden("payment.json", o.payment());
    check_golden("payment_s1.json", Payment{"alice", "shop", o.batch.coins[1]});
}

TEST_CASE("decoded commitment still verifies") {
    const auto& o = objects();
    auto decoded = decode<PaywordCommitment>(encode(o.commitment));
    CHECK(verify_commitment(decoded, o.key.public_key));
    CHECK(sha256(encode(o.commitment)) == sha256(encode(decoded)));
}

TEST_CASE("decode rejects invariant violations with the rule named") {
    const auto& o = objects();
    std::string coin = encode(std::get<ChainCoin>(o.payment().item));
    auto zero = replace_once(coin, "\"position\": 1", "\"position\": 0");
    CHECK(format_error([&] { decode<ChainCoin>(zero); }).find("positions start at 1") != std::string::npos);

    std::string modulus = encode(o.modulus);
    auto upper = replace_once(modulus, "\"modulus\": \"439\"", "\"modulus\": \"43A\"");
    CHECK(format_error([&] { decode<TrapdoorModulus>(upper); }).find("canonical") != std::string::npos);
    auto leading = replace_once(modulus, "\"modulus\": \"439\"", "\"modulus\": \"0439\"");
    format_error([&] { decode<TrapdoorModulus>(leading); });
    auto wrong_product = replace_once(modulus, "\"modulus\": \"439\"", "\"modulus\": \"43b\"");
    CHECK(format_error([&] { decode<TrapdoorModulus>(wrong_product); }).find("p*q") != std::string::npos);

    auto other_schema = replace_once(coin, "mdhc.chain_coin", "mdhc.coin_s1");
    CHECK(format_error([&] { decode<ChainCoin>(other_schema); }).find("schema") != std::string::npos);
    auto version = replace_once(coin, "\"version\": 1", "\"version\": 2");
    CHECK(format_error([&] { decode<ChainCoin>(version); }).find("version") != std::string::npos);
    auto extra = replace_once(coin, "\"position\": 1", "\"position\": 1, \"bonus\": 5");
    CHECK(format_error([&] { decode<ChainCoin>(extra); }).find("bonus") != std::string::npos);
    auto missing = replace_once(coin, "\"position\": 1,", "");
    CHECK(format_error([&] { decode<ChainCoin>(missing); }).find("position") != std::string::npos);
    format_error([&] { decode<ChainCoin>(coin.substr(0, coin.size() / 2)); });
    format_error([&] { decode<ChainCoin>("[]"); });

    std::string wallet = encode(o.customer_wallet());
    auto overrun = replace_once(wallet, "\"next_position\": 3", "\"next_position\": 9");
    format_error([&] { decode<CustomerWallet>(overrun); });

    std::string public_params = encode(o.bank.public_params());
    auto even = replace_once(public_params, "\"3\"", "\"4\"");
    CHECK(format_error([&] { decode<PublicParams>(even); }).find("invariant") != std::string::npos);
}

TEST_CASE("ledger records round trip") {
    std::vector<Event> events{
        MintS1Event{"s1-x", "abc", 99, {0, 1}, CoinTags{"v", "c"}},
        DepositS1Event{CoinId{"abc", 1}, "shop"},
        RefundS1Event{{CoinId{"abc", 0}}, "c"},
        MintS2Event{"def", 77, 5, {0, 1, 2}, {}},
        ClaimS2Event{CoinId{"def", 2}, "cafe"},
        RedeemS2Event{CoinId{"def", 2}, "cafe", 4, 4},
        SettleEvent{"ghi", "dave", {{"v1", 2}, {"v2", 1}}, 3},
    };
    for (std::size_t i = 0; i < events.size(); ++i) {
        LedgerRecord record{i + 1, events[i]};
        std::string line = encode_record(record);
        CHECK(line.find('\n') == std::string::npos);
        CHECK(decode_record(line) == record);
    }
    CHECK(errc_of([] { decode_record(R"({"seq":1,"op":"mint_s3","data":{}})"); }) == Errc::format);
}

TEST_CASE("replay") {
    CHECK(replay({}) == BankState{});

    Bank bank(testing::fixture_modulus(), testing::fixture_exponents(3));
    std::vector<LedgerRecord> records;
    bank.set_journal([&](const Event& e) { records.push_back({records.size() + 1, e}); });
    BatchS1 batch = mint_batch_s1_from_start(bank, 123, 3);
    deposit_coin_s1(bank, batch.coins[0], "shop");
    BankState replayed = replay(records);
    CHECK(replayed == bank.snapshot());
    CHECK(replayed.s1.deposited.size() == 1);

    auto duplicate = records;
    duplicate.push_back(duplicate.back());
    CHECK(errc_of([&] { replay(duplicate); }) == Errc::replay);
    auto gap = records;
    gap[1].seq = 3;
    CHECK(errc_of([&] { replay(gap); }) == Errc::replay);

    // The same deposit twice is a corrupt record even with a valid sequence number.
    auto twice = records;
    twice.push_back(LedgerRecord{3, records[1].event});
    try {
        replay(twice);
        FAIL("expected replay failure");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::replay);
        CHECK(std::string(e.what()).find("record 3") != std::string::npos);
    }
}

TEST_CASE("ledger files") {
    fs::path dir = fs::temp_directory_path() / "mdhc-store-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path path = dir / "ledger.jsonl";
    CHECK(read_ledger(path).empty());

    Bank bank(testing::fixture_modulus(), testing::fixture_exponents(3));
    {
        LedgerWriter writer(path);
        bank.set_journal([&](const Event& e) { writer.append(e); });
        BatchS1 batch = mint_batch_s1_from_start(bank, 123, 3);
        deposit_coin_s1(bank, batch.coins[2], "shop");
        CHECK(writer.last_seq() == 2);
    }
    {
        LedgerWriter writer(path);
        CHECK(writer.last_seq() == 2);
        bank.set_journal([&](const Event& e) { writer.append(e); });
        mint_batch_s1_from_start(bank, 200, 2);
    }
    auto records = read_ledger(path);
    CHECK(records.size() == 3);
    CHECK(replay(records) == bank.snapshot());

    std::ofstream(path, std::ios::app) << "{not json}\n";
    try {
        read_ledger(path);
        FAIL("expected a corrupt ledger");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::replay);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    fs::remove_all(dir);
}

}  // TEST_SUITE
