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

#include "mdhc/workspace.hpp"

#include "mdhc/errors.hpp"
#include "mdhc/scheme_s1.hpp"
#include "mdhc/scheme_s2.hpp"

#include <json.hpp>

namespace mdhc {

using json = nlohmann::json;

namespace {

constexpr const char* kPublicFile = "params.public.json";
constexpr const char* kPrivateFile = "params.private.json";
constexpr const char* kLedgerFile = "ledger.jsonl";

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

json exponents_json(const ExponentSet& set) {
    json out = json::array();
    for (const auto& c : set.values) out.push_back(to_hex(c));
    return out;
}

json cost_json(const OpCounter& c) {
    return {{"modexp", c.modexp}, {"modmul", c.modmul}};
}

void check_name(const std::string& name, const char* what) {
    if (name.empty() || name.size() > 64) {
        throw Error(Errc::invalid_argument, std::string(what) + " name must be 1 to 64 characters");
    }
    for (char ch : name) {
        bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                  ch == '_';
        if (!ok) {
            throw Error(Errc::invalid_argument, std::string(what) + " name may only use letters, digits, '-' and '_'");
        }
    }
}

std::string key_string(const ChainKey& key) {
    return key.root_id + "/" + std::to_string(key.exponent_index);
}

}  // namespace

std::string Workspace::create(const std::filesystem::path& dir, const std::string& profile_name,
                              std::size_t prime_bits, std::size_t m, const Bytes& seed) {
    const Profile& profile = profile_by_name(profile_name);
    if (prime_bits == 0) prime_bits = profile.prime_bits;
    if (m == 0) m = profile.default_dimensions;

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());
    }
    if (std::filesystem::exists(dir / kPublicFile) || std::filesystem::exists(dir / kPrivateFile)) {
        throw Error(Errc::io, dir.string() + " already holds parameters");
    }

    SeededStream rng(seed);
    SeededStream modulus_rng = rng.fork("params");
    TrapdoorModulus modulus = generate_modulus(prime_bits, modulus_rng);
    PublicParams pub{modulus.modulus, select_exponents(m, modulus)};

    write_file(dir / kPrivateFile, encode(modulus));
    write_file(dir / kPublicFile, encode(pub));
    write_file(dir / kLedgerFile, "");

    json summary{{"profile", profile.name},
                 {"prime_bits", prime_bits},
                 {"dimensions", m},
                 {"modulus", to_hex(pub.modulus)},
                 {"modulus_bits", bit_length(pub.modulus)},
                 {"exponents", exponents_json(pub.exponents)},
                 {"seed", bytes_to_hex(seed)}};
    return dump(summary);
}

Workspace::Workspace(std::filesystem::path dir) : dir_(std::move(dir)) {
    auto modulus = decode<TrapdoorModulus>(read_file(dir_ / kPrivateFile));
    auto pub = decode<PublicParams>(read_file(dir_ / kPublicFile));
    if (pub.modulus != modulus.modulus) {
        throw Error(Errc::inconsistent, "public and private parameters disagree on the modulus");
    }
    bank_ = std::make_unique<Bank>(modulus, pub.exponents);
    auto records = read_ledger(dir_ / kLedgerFile);
    bank_->restore(replay(records));
    ledger_ = std::make_unique<LedgerWriter>(dir_ / kLedgerFile);
    bank_->set_journal([this](const Event& event) { ledger_->append(event); });
}

Workspace::~Workspace() = default;

const Bank& Workspace::bank() const {
    return *bank_;
}

std::filesystem::path Workspace::wallet_path(const std::string& name) const {
    return dir_ / ("wallet." + name + ".json");
}

std::string Workspace::mint(const std::string& scheme, std::uint32_t length, const Bytes& seed,
                            const std::string& customer, const std::optional<std::string>& vendor_tag) {
    check_name(customer, "customer");
    if (vendor_tag) check_name(*vendor_tag, "vendor");

    CustomerWallet wallet{customer, {}, {}};
    if (std::filesystem::exists(wallet_path(customer))) {
        wallet = decode<CustomerWallet>(read_file(wallet_path(customer)));
    }
    CoinTags tags{vendor_tag, customer};
    SeededStream rng(seed);
    json summary{{"scheme", scheme}, {"customer", customer}};

    if (scheme == "s1") {
        BatchS1 batch = mint_batch_s1(*bank_, rng, tags);
        BatchS1 published = batch;
        published.coins.clear();
        write_file(dir_ / ("batch." + batch.batch_id + ".json"), encode(published));
        json coins = json::array();
        for (const auto& coin : batch.coins) {
            coins.push_back({{"exponent_index", coin.exponent_index}, {"exponent", to_hex(coin.exponent)}});
            wallet.coins.push_back(coin);
        }
        summary["batch_id"] = batch.batch_id;
        summary["root_id"] = batch.root_id;
        summary["root"] = to_hex(batch.root);
        summary["coins"] = coins;
        summary["cost"] = cost_json(batch.cost);
    } else if (scheme == "s2") {
        if (length < 1) {
            throw Error(Errc::invalid_argument, "chain length must be at least 1");
        }
        MintS2Result result = mint_chains_s2(*bank_, length, rng, tags);
        BatchS1 published{result.root_id, result.root_id, result.root, {}, result.cost};
        write_file(dir_ / ("batch." + result.root_id + ".json"), encode(published));
        json chains = json::array();
        for (const auto& handle : result.chains) {
            chains.push_back({{"exponent_index", handle.exponent_index},
                              {"exponent", to_hex(handle.exponent)},
                              {"length", handle.length}});
            wallet.chains.push_back(ChainSpend{handle, 1});
        }
        summary["root_id"] = result.root_id;
        summary["root"] = to_hex(result.root);
        summary["chains"] = chains;
        summary["cost"] = cost_json(result.cost);
    } else {
        throw Error(Errc::invalid_argument, "scheme must be s1 or s2");
    }
    if (vendor_tag) summary["vendor"] = *vendor_tag;
    write_file(wallet_path(customer), encode(wallet));
    return dump(summary);
}

std::string Workspace::pay(const std::string& customer, const std::string& vendor) {
    check_name(customer, "customer");
    check_name(vendor, "vendor");
    auto wallet = decode<CustomerWallet>(read_file(wallet_path(customer)));
    Payment payment{customer, vendor, CoinS1{}};

    if (!wallet.coins.empty()) {
        payment.item = wallet.coins.front();
        wallet.coins.erase(wallet.coins.begin());
    } else {
        auto spend = std::find_if(wallet.chains.begin(), wallet.chains.end(),
                                  [](const ChainSpend& s) { return s.next_position <= s.handle.length; });
        if (spend == wallet.chains.end()) {
            throw Error(Errc::chain_exhausted, "wallet of " + customer + " holds no unspent coins");
        }
        CustomerChain chain(spend->handle, bank_->public_params().modulus);
        chain.set_next_position(spend->next_position);
        payment.item = chain.pay_next_coin();
        spend->next_position = chain.next_position();
    }
    write_file(wallet_path(customer), encode(wallet));
    return encode(payment);
}

Outcome Workspace::verify(const std::string& vendor, const std::string& payment_text) {
    check_name(vendor, "vendor");
    auto payment = decode<Payment>(payment_text);
    if (payment.vendor != vendor) {
        return Outcome::wrong_vendor;
    }
    VendorWallet wallet{vendor, {}, {}, {}};
    if (std::filesystem::exists(wallet_path(vendor))) {
        wallet = decode<VendorWallet>(read_file(wallet_path(vendor)));
    }

    Outcome verdict = Outcome::invalid;
    if (const auto* coin = std::get_if<CoinS1>(&payment.item)) {
        VendorS1 checker{vendor, {}};
        for (const auto& held : wallet.received) checker.seen.insert(held.id());
        {
            std::scoped_lock lock(bank_->mutex());
            verdict = checker.accept_offline(*coin, bank_->public_params(), bank_->state().s1);
        }
        if (verdict == Outcome::accept) {
            verdict = check_unspent_online(*bank_, *coin);
        }
        if (verdict == Outcome::accept) {
            wallet.received.push_back(*coin);
        }
    } else {
        const auto& chain_coin = std::get<ChainCoin>(payment.item);
        VendorS2 receiver{vendor, GapPolicy::strict, {}};
        for (const auto& head : wallet.chain_heads) receiver.latest[head.key()] = head;
        verdict = receiver.receive(chain_coin, *bank_);
        if (verdict == Outcome::accept) {
            auto head = std::find_if(wallet.chain_heads.begin(), wallet.chain_heads.end(),
                                     [&](const ChainCoin& c) { return c.key() == chain_coin.key(); });
            if (head == wallet.chain_heads.end()) {
                wallet.chain_heads.push_back(chain_coin);
            } else {
                *head = chain_coin;
            }
        }
    }
    if (verdict == Outcome::accept) {
        write_file(wallet_path(vendor), encode(wallet));
    }
    return verdict;
}

std::string Workspace::redeem(const std::string& vendor, std::uint64_t& credited, bool& all_ok) {
    check_name(vendor, "vendor");
    credited = 0;
    all_ok = true;
    if (!std::filesystem::exists(wallet_path(vendor))) {
        throw Error(Errc::io, "no wallet for vendor " + vendor);
    }
    auto wallet = decode<VendorWallet>(read_file(wallet_path(vendor)));
    json items = json::array();

    for (const auto& coin : wallet.received) {
        DepositResult result = deposit_coin_s1(*bank_, coin, vendor);
        credited += result.credited;
        all_ok = all_ok && is_success(result.outcome);
        items.push_back({{"scheme", "s1"},
                         {"coin", key_string(coin.id())},
                         {"outcome", std::string(outcome_name(result.outcome))},
                         {"credited", result.credited}});
    }
    wallet.received.clear();

    for (const auto& head : wallet.chain_heads) {
        std::string key = key_string(head.key());
        auto done = wallet.redeemed.find(key);
        if (done != wallet.redeemed.end() && done->second >= head.position) {
            continue;
        }
        RedeemResult result = redeem_chain(*bank_, head, vendor);
        credited += result.credited;
        all_ok = all_ok && is_success(result.outcome);
        if (is_success(result.outcome)) {
            wallet.redeemed[key] = head.position;
        }
        items.push_back({{"scheme", "s2"},
                         {"chain", key},
                         {"position", head.position},
                         {"outcome", std::string(outcome_name(result.outcome))},
                         {"credited", result.credited}});
    }
    write_file(wallet_path(vendor), encode(wallet));

    json summary{{"vendor", vendor}, {"items", items}, {"credited", credited}, {"balance", bank_->balance(vendor)}};
    return dump(summary);
}

}  // namespace mdhc
