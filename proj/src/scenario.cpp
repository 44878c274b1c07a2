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

#include "mdhc/scenario.hpp"

#include "mdhc/errors.hpp"
#include "mdhc/payword.hpp"
#include "mdhc/scheme_s1.hpp"
#include "mdhc/scheme_s2.hpp"

#include <json.hpp>

#include <sstream>

namespace mdhc {

using json = nlohmann::json;

namespace {

constexpr std::string_view kSchema = "mdhc.scenario";
constexpr std::size_t kSignatureBits = 512;

enum class Kind { batch, chains, payment_s1, payment_s2, payword, commitment };

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::batch: return "S1 batch";
        case Kind::chains: return "S2 chain set";
        case Kind::payment_s1: return "S1 payment";
        case Kind::payment_s2: return "S2 payment";
        case Kind::payword: return "payword payment";
        case Kind::commitment: return "commitment";
    }
    return "object";
}

[[noreturn]] void script_error(std::size_t step, const std::string& why) {
    if (step == 0) throw Error(Errc::format, "scenario: " + why);
    throw Error(Errc::format, "scenario step " + std::to_string(step) + ": " + why);
}

json parse_script(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::format, std::string("scenario: ") + e.what());
    }
}

std::string field_str(const json& step, const char* key, std::size_t index) {
    auto it = step.find(key);
    if (it == step.end() || !it->is_string()) script_error(index, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::uint64_t field_u64(const json& step, const char* key, std::size_t index) {
    auto it = step.find(key);
    if (it == step.end() || !it->is_number_unsigned()) {
        script_error(index, std::string("field '") + key + "' must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

// Structural pass shared by validate_scenario and run_scenario.
struct Checked {
    std::string name;
    std::string profile;
    Bytes seed;
    std::size_t dimensions = 0;
    std::map<std::string, std::string> roles;
    json steps;
};

Checked check_script(const json& doc) {
    if (!doc.is_object()) script_error(0, "script must be an object");
    Checked out;
    if (doc.value("schema", std::string()) != kSchema) script_error(0, "schema must be 'mdhc.scenario'");
    out.name = doc.contains("name") ? field_str(doc, "name", 0) : "scenario";
    out.profile = doc.contains("profile") ? field_str(doc, "profile", 0) : "toy";
    const Profile& profile = profile_by_name(out.profile);
    std::string seed = field_str(doc, "seed", 0);
    if (seed.empty() || seed.find_first_not_of("0123456789abcdef") != std::string::npos) {
        script_error(0, "seed must be lowercase hex");
    }
    out.seed = hex_to_bytes(seed);
    out.dimensions = doc.contains("dimensions") ? field_u64(doc, "dimensions", 0) : profile.default_dimensions;
    if (out.dimensions < 1 || out.dimensions > 64) script_error(0, "dimensions must lie in 1..64");

    auto actors = doc.find("actors");
    if (actors == doc.end() || !actors->is_array()) script_error(0, "actors must be an array");
    for (const auto& actor : *actors) {
        std::string name = field_str(actor, "name", 0);
        std::string role = field_str(actor, "role", 0);
        if (role != "bank" && role != "customer" && role != "vendor") {
            script_error(0, "actor " + name + " has unknown role '" + role + "'");
        }
        if (!out.roles.emplace(name, role).second) script_error(0, "actor " + name + " declared twice");
    }

    auto steps = doc.find("steps");
    if (steps == doc.end() || !steps->is_array()) script_error(0, "steps must be an array");
    out.steps = *steps;

    std::map<std::string, Kind> objects;
    std::map<std::string, std::string> commitment_purpose;
    auto need = [&](std::size_t i, const json& step, const char* key, std::initializer_list<Kind> kinds) -> Kind {
        std::string ref = field_str(step, key, i);
        auto it = objects.find(ref);
        if (it == objects.end()) script_error(i, "object '" + ref + "' is used before it is declared");
        for (Kind k : kinds) {
            if (it->second == k) return k;
        }
        script_error(i, "object '" + ref + "' is a " + kind_name(it->second) + ", not usable here");
    };
    auto need_actor = [&](std::size_t i, const std::string& name, const char* role) {
        auto it = out.roles.find(name);
        if (it == out.roles.end()) script_error(i, "actor '" + name + "' is not declared");
        if (role && it->second != role) script_error(i, "actor '" + name + "' must be a " + role);
    };
    auto bind = [&](std::size_t i, const json& step, Kind kind) {
        std::string name = field_str(step, "as", i);
        if (!objects.emplace(name, kind).second) script_error(i, "object '" + name + "' declared twice");
    };

    for (std::size_t i = 1; i <= out.steps.size(); ++i) {
        const json& step = out.steps[i - 1];
        if (!step.is_object()) script_error(i, "step must be an object");
        std::string actor = field_str(step, "actor", i);
        std::string action = field_str(step, "action", i);
        need_actor(i, actor, nullptr);
        if (step.contains("expect")) {
            if (!outcome_from_name(field_str(step, "expect", i))) script_error(i, "unknown expected outcome");
        }
        if (step.contains("expect_value") && !step["expect_value"].is_number_integer()) {
            script_error(i, "expect_value must be an integer");
        }

        if (action == "mint") {
            need_actor(i, actor, "customer");
            std::string scheme = field_str(step, "scheme", i);
            if (scheme == "s1") {
                bind(i, step, Kind::batch);
            } else if (scheme == "s2") {
                if (field_u64(step, "length", i) < 1) script_error(i, "length must be at least 1");
                bind(i, step, Kind::chains);
            } else {
                script_error(i, "scheme must be s1 or s2");
            }
            if (step.contains("vendor")) need_actor(i, field_str(step, "vendor", i), "vendor");
        } else if (action == "pay") {
            need_actor(i, actor, "customer");
            need_actor(i, field_str(step, "to", i), "vendor");
            field_u64(step, "item", i);
            Kind from = need(i, step, "from", {Kind::batch, Kind::chains});
            bind(i, step, from == Kind::batch ? Kind::payment_s1 : Kind::payment_s2);
        } else if (action == "refund") {
            need_actor(i, actor, "customer");
            need(i, step, "from", {Kind::batch});
            if (!step.contains("items") || !step["items"].is_array()) script_error(i, "items must be an array");
            bind(i, step, Kind::batch);
        } else if (action == "commit") {
            need_actor(i, actor, "customer");
            std::string purpose = field_str(step, "purpose", i);
            if (purpose == "denomination") {
                field_u64(step, "n", i);
                field_u64(step, "m", i);
            } else if (purpose == "multivendor") {
                field_u64(step, "n", i);
                if (!step.contains("vendors") || !step["vendors"].is_array() || step["vendors"].empty()) {
                    script_error(i, "vendors must be a non-empty array");
                }
                for (const auto& v : step["vendors"]) {
                    if (!v.is_string()) script_error(i, "vendors must be names");
                    need_actor(i, v.get<std::string>(), "vendor");
                }
            } else {
                script_error(i, "purpose must be denomination or multivendor");
            }
            bind(i, step, Kind::commitment);
            commitment_purpose[step["as"].get<std::string>()] = purpose;
        } else if (action == "pay_amount" || action == "pay_vendor") {
            need_actor(i, actor, "customer");
            need_actor(i, field_str(step, "to", i), "vendor");
            need(i, step, "commitment", {Kind::commitment});
            std::string purpose = commitment_purpose.at(step["commitment"].get<std::string>());
            if (action == "pay_amount") {
                if (purpose != "denomination") script_error(i, "pay_amount needs a denomination commitment");
                field_u64(step, "amount", i);
            } else if (purpose != "multivendor") {
                script_error(i, "pay_vendor needs a multivendor commitment");
            }
            bind(i, step, Kind::payword);
        } else if (action == "verify") {
            need_actor(i, actor, "vendor");
            need(i, step, "payment", {Kind::payment_s1, Kind::payment_s2, Kind::payword});
        } else if (action == "deposit") {
            need_actor(i, actor, "vendor");
            need(i, step, "payment", {Kind::payment_s1});
        } else if (action == "redeem") {
            need_actor(i, actor, "vendor");
            need(i, step, "payment", {Kind::payment_s2, Kind::payword});
        } else if (action == "settle") {
            need_actor(i, actor, "bank");
            need(i, step, "commitment", {Kind::commitment});
            if (!step.contains("deposits") || !step["deposits"].is_array()) script_error(i, "deposits must be an array");
            for (const auto& d : step["deposits"]) {
                if (!d.is_string()) script_error(i, "deposits must name payments");
                json probe{{"payment", d}};
                need(i, probe, "payment", {Kind::payword});
            }
        } else if (action == "forge") {
            need_actor(i, actor, "vendor");
            need(i, step, "against", {Kind::batch});
            field_u64(step, "count", i);
        } else if (action == "balance") {
            need_actor(i, field_str(step, "account", i), nullptr);
        } else {
            script_error(i, "unknown action '" + action + "'");
        }
    }
    return out;
}

struct PaywordPayment {
    std::string commitment;
    std::string vendor;
    Node node;
    std::uint64_t total = 0;
};

struct PaymentObject {
    std::string vendor;
    std::variant<CoinS1, ChainCoin, PaywordPayment> item;
};

struct CommitmentObject {
    std::string customer;
    PaywordCommitment commitment;
    SecretChain chain;
    SpendState state;
};

class Runner {
public:
    explicit Runner(const Checked& script)
        : script_(script), rng_(script.seed), bank_(make_bank(script, rng_)) {
        bank_->set_journal([this](const Event& event) { ledger_.push_back({ledger_.size() + 1, event}); });
    }

    ScenarioReport run() {
        ScenarioReport report;
        report.name = script_.name;
        for (std::size_t i = 1; i <= script_.steps.size(); ++i) {
            report.steps.push_back(run_step(i, script_.steps[i - 1]));
        }
        report.final_state = bank_->snapshot();
        report.ledger = ledger_;
        return report;
    }

private:
    static std::unique_ptr<Bank> make_bank(const Checked& script, SeededStream& rng) {
        SeededStream params_rng = rng.fork("params");
        TrapdoorModulus modulus = generate_modulus(profile_by_name(script.profile).prime_bits, params_rng);
        return std::make_unique<Bank>(modulus, select_exponents(script.dimensions, modulus));
    }

    const SignatureKeypair& key_for(const std::string& customer) {
        auto it = keys_.find(customer);
        if (it == keys_.end()) {
            SeededStream key_rng = rng_.fork("signature:" + customer);
            it = keys_.emplace(customer, generate_signature_keypair(kSignatureBits, key_rng)).first;
        }
        return it->second;
    }

    template <class T>
    static const T& at(const std::vector<T>& items, std::uint64_t index, std::size_t step) {
        if (index >= items.size()) {
            throw Error(Errc::out_of_range, "scenario step " + std::to_string(step) + ": item " +
                                                std::to_string(index) + " does not exist");
        }
        return items[index];
    }

    StepResult run_step(std::size_t i, const json& step) {
        StepResult r;
        r.step = i;
        r.actor = step["actor"].get<std::string>();
        r.action = step["action"].get<std::string>();
        SeededStream rng = rng_.fork("step:" + std::to_string(i));
        Outcome outcome = Outcome::accept;
        std::optional<std::int64_t> value;
        const std::string& actor = r.actor;

        if (r.action == "mint") {
            CoinTags tags{std::nullopt, actor};
            if (step.contains("vendor")) tags.vendor_id = step["vendor"].get<std::string>();
            std::string name = step["as"].get<std::string>();
            if (step["scheme"] == "s1") {
                BatchS1 batch = mint_batch_s1(*bank_, rng, tags);
                value = static_cast<std::int64_t>(batch.coins.size());
                batches_[name] = std::move(batch);
            } else {
                auto length = static_cast<std::uint32_t>(step["length"].get<std::uint64_t>());
                MintS2Result minted = mint_chains_s2(*bank_, length, rng, tags);
                std::vector<CustomerChain> held;
                for (const auto& handle : minted.chains) held.emplace_back(handle, bank_->public_params().modulus);
                value = static_cast<std::int64_t>(held.size());
                chains_.emplace(name, std::move(held));
            }
        } else if (r.action == "pay") {
            std::string from = step["from"].get<std::string>();
            std::uint64_t item = step["item"].get<std::uint64_t>();
            PaymentObject payment{step["to"].get<std::string>(), CoinS1{}};
            const BigInt& modulus = bank_->public_params().modulus;
            if (auto batch = batches_.find(from); batch != batches_.end()) {
                CoinS1 coin = at(batch->second.coins, item, i);
                if (step.value("tamper", false)) coin.value = (coin.value + 1) % modulus;
                payment.item = coin;
            } else {
                auto& held = chains_.at(from);
                if (item >= held.size()) at(held, item, i);
                CustomerChain& chain = held[item];
                ChainCoin coin;
                if (step.contains("position")) {
                    auto position = static_cast<std::uint32_t>(step["position"].get<std::uint64_t>());
                    coin = chain.coin_at(position);
                } else {
                    coin = chain.pay_next_coin();
                }
                if (step.value("tamper", false)) coin.value = (coin.value + 1) % modulus;
                value = coin.position;
                payment.item = coin;
            }
            payments_[step["as"].get<std::string>()] = std::move(payment);
        } else if (r.action == "refund") {
            const BatchS1& batch = batches_.at(step["from"].get<std::string>());
            std::vector<CoinS1> coins;
            for (const auto& item : step["items"]) coins.push_back(at(batch.coins, item.get<std::uint64_t>(), i));
            RefundResult refund = refund_unspent(*bank_, coins, rng, actor);
            outcome = refund.outcome;
            value = static_cast<std::int64_t>(refund.replacement.size());
            BatchS1 replacement;
            if (!refund.replacement.empty()) {
                replacement.batch_id = refund.replacement.front().batch_id;
                replacement.root_id = refund.replacement.front().root_id;
            }
            replacement.coins = std::move(refund.replacement);
            batches_[step["as"].get<std::string>()] = std::move(replacement);
        } else if (r.action == "commit") {
            CommitmentObject object;
            object.customer = actor;
            std::vector<std::string> bindings;
            auto n = static_cast<std::uint32_t>(step["n"].get<std::uint64_t>());
            std::size_t m = 0;
            CommitmentPurpose purpose = purpose_from_name(step["purpose"].get<std::string>());
            if (purpose == CommitmentPurpose::multivendor) {
                for (const auto& v : step["vendors"]) bindings.push_back(v.get<std::string>());
                m = bindings.size();
            } else {
                m = step["m"].get<std::uint64_t>();
            }
            if (m > bank_->public_params().exponents.size()) {
                throw Error(Errc::out_of_range, "scenario step " + std::to_string(i) +
                                                    ": commitment needs more dimensions than the bank publishes");
            }
            object.chain.params = bank_->public_params().chain(std::vector<std::uint32_t>(m, n));
            object.chain.start = random_start(object.chain.params.modulus, rng);
            OpCounter counter;
            object.commitment = commit(key_for(actor), actor, object.chain, purpose, bindings, counter);
            object.state = initial_spend_state(m);
            value = static_cast<std::int64_t>(counter.modexp);
            commitments_[step["as"].get<std::string>()] = std::move(object);
        } else if (r.action == "pay_amount" || r.action == "pay_vendor") {
            std::string name = step["commitment"].get<std::string>();
            CommitmentObject& object = commitments_.at(name);
            std::string to = step["to"].get<std::string>();
            OpCounter counter;
            Payword word;
            // A forking customer spends again from the unspent state.
            SpendState base = step.value("fork", false) ? initial_spend_state(object.chain.params.dimensions())
                                                        : object.state;
            if (r.action == "pay_amount") {
                word = pay_denominated(base, step["amount"].get<std::uint64_t>(), object.chain, counter);
            } else {
                const auto& bindings = object.commitment.vendor_bindings;
                auto it = std::find(bindings.begin(), bindings.end(), to);
                if (it == bindings.end()) {
                    throw Error(Errc::dimension_unbound, "scenario step " + std::to_string(i) + ": vendor " + to +
                                                             " has no dimension in this commitment");
                }
                std::size_t dim = static_cast<std::size_t>(it - bindings.begin()) + 1;
                word = pay_vendor(base, dim, to, object.chain, object.commitment, counter);
            }
            object.state = word.state;
            value = static_cast<std::int64_t>(word.state.total);
            payments_[step["as"].get<std::string>()] =
                PaymentObject{to, PaywordPayment{name, to, word.node, word.state.total}};
        } else if (r.action == "verify") {
            const PaymentObject& payment = payments_.at(step["payment"].get<std::string>());
            if (payment.vendor != actor) {
                outcome = Outcome::wrong_vendor;
            } else if (const auto* coin = std::get_if<CoinS1>(&payment.item)) {
                auto& vendor = vendors_s1_.try_emplace(actor, VendorS1{actor, {}}).first->second;
                std::scoped_lock lock(bank_->mutex());
                outcome = vendor.accept_offline(*coin, bank_->public_params(), bank_->state().s1);
            } else if (const auto* coin = std::get_if<ChainCoin>(&payment.item)) {
                auto& vendor = vendors_s2_.try_emplace(actor, VendorS2{actor, GapPolicy::strict, {}}).first->second;
                OpCounter counter;
                outcome = vendor.receive(*coin, *bank_, counter);
                value = static_cast<std::int64_t>(counter.modexp);
            } else {
                const auto& word = std::get<PaywordPayment>(payment.item);
                const CommitmentObject& object = commitments_.at(word.commitment);
                OpCounter counter;
                if (!verify_commitment(object.commitment, key_for(object.customer).public_key)) {
                    outcome = Outcome::bad_signature;
                } else if (object.commitment.purpose == CommitmentPurpose::denomination) {
                    outcome = verify_denominated(object.commitment, word.node, word.total, counter);
                } else {
                    auto key = std::make_pair(actor, word.commitment);
                    auto it = verifiers_.find(key);
                    if (it == verifiers_.end()) it = verifiers_.emplace(key, PaywordVerifier(object.commitment)).first;
                    outcome = it->second.verify(word.node, counter);
                }
                value = static_cast<std::int64_t>(counter.modexp);
            }
        } else if (r.action == "deposit") {
            const auto& coin = std::get<CoinS1>(payments_.at(step["payment"].get<std::string>()).item);
            DepositResult result = deposit_coin_s1(*bank_, coin, actor);
            outcome = result.outcome;
            value = static_cast<std::int64_t>(result.credited);
        } else if (r.action == "redeem") {
            const PaymentObject& payment = payments_.at(step["payment"].get<std::string>());
            if (const auto* coin = std::get_if<ChainCoin>(&payment.item)) {
                RedeemResult result = redeem_chain(*bank_, *coin, actor);
                outcome = result.outcome;
                value = static_cast<std::int64_t>(result.credited);
            } else {
                const auto& word = std::get<PaywordPayment>(payment.item);
                const CommitmentObject& object = commitments_.at(word.commitment);
                Settlement result = redeem_denominated(*bank_, object.commitment, key_for(object.customer).public_key,
                                                       actor, word.node, word.total);
                outcome = result.outcome;
                value = static_cast<std::int64_t>(result.debit);
            }
        } else if (r.action == "settle") {
            const CommitmentObject& object = commitments_.at(step["commitment"].get<std::string>());
            std::vector<Deposit> deposits;
            for (const auto& name : step["deposits"]) {
                const auto& word = std::get<PaywordPayment>(payments_.at(name.get<std::string>()).item);
                deposits.push_back(Deposit{word.vendor, word.node});
            }
            Settlement result =
                settle_multivendor(*bank_, object.commitment, key_for(object.customer).public_key, deposits);
            outcome = result.outcome;
            value = static_cast<std::int64_t>(result.debit);
        } else if (r.action == "forge") {
            const BatchS1& batch = batches_.at(step["against"].get<std::string>());
            const auto& params = bank_->public_params();
            std::uint64_t count = step["count"].get<std::uint64_t>();
            std::int64_t accepted = 0;
            std::scoped_lock lock(bank_->mutex());
            for (std::uint64_t k = 0; k < count; ++k) {
                CoinS1 forged;
                forged.root_id = batch.root_id;
                forged.batch_id = batch.batch_id;
                forged.exponent_index = static_cast<std::uint32_t>(rng.below(params.exponents.size()).get_ui());
                forged.exponent = params.exponents[forged.exponent_index];
                forged.value = rng.between(2, params.modulus - 2);
                if (verify_coin_s1(forged, params, bank_->state().s1) == Outcome::accept) ++accepted;
            }
            outcome = accepted == 0 ? Outcome::bad_value : Outcome::accept;
            value = accepted;
        } else if (r.action == "balance") {
            value = bank_->balance(step["account"].get<std::string>());
        }

        r.outcome = std::string(outcome_name(outcome));
        r.value = value;
        if (step.contains("expect")) r.expected = step["expect"].get<std::string>();
        if (step.contains("expect_value")) r.expected_value = step["expect_value"].get<std::int64_t>();
        r.matched = (!r.expected || *r.expected == r.outcome) && (!r.expected_value || r.expected_value == r.value);
        return r;
    }

    const Checked& script_;
    SeededStream rng_;
    std::unique_ptr<Bank> bank_;
    std::vector<LedgerRecord> ledger_;
    std::map<std::string, SignatureKeypair> keys_;
    std::map<std::string, BatchS1> batches_;
    std::map<std::string, std::vector<CustomerChain>> chains_;
    std::map<std::string, PaymentObject> payments_;
    std::map<std::string, CommitmentObject> commitments_;
    std::map<std::string, VendorS1> vendors_s1_;
    std::map<std::string, VendorS2> vendors_s2_;
    std::map<std::pair<std::string, std::string>, PaywordVerifier> verifiers_;
};

}  // namespace

bool ScenarioReport::ok() const {
    return std::all_of(steps.begin(), steps.end(), [](const StepResult& s) { return s.matched; });
}

std::string ScenarioReport::to_text() const {
    std::ostringstream out;
    out << "# scenario " << name << "\n";
    out << "step\tactor\taction\toutcome\tvalue\tstatus\n";
    std::size_t matched = 0;
    for (const auto& s : steps) {
        out << s.step << '\t' << s.actor << '\t' << s.action << '\t' << s.outcome << '\t'
            << (s.value ? std::to_string(*s.value) : "-") << '\t' << (s.matched ? "OK" : "MISMATCH");
        if (!s.matched) {
            out << " (expected";
            if (s.expected) out << ' ' << *s.expected;
            if (s.expected_value) out << " value=" << *s.expected_value;
            out << ')';
        }
        out << '\n';
        matched += s.matched ? 1 : 0;
    }
    out << "# " << (ok() ? "OK" : "MISMATCH") << ' ' << matched << '/' << steps.size() << " steps matched, "
        << ledger.size() << " ledger records\n";
    return out.str();
}

void validate_scenario(std::string_view script) {
    check_script(parse_script(script));
}

ScenarioReport run_scenario(std::string_view script) {
    Checked checked = check_script(parse_script(script));
    try {
        return Runner(checked).run();
    } catch (const json::exception& e) {
        throw Error(Errc::format, std::string("scenario: ") + e.what());
    }
}

}  // namespace mdhc
