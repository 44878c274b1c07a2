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

#include "mdhc/store.hpp"

#include "mdhc/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mdhc {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& context, const std::string& why) {
    throw Error(Errc::format, context + ": " + why);
}

json hex(const BigInt& value) {
    return to_hex(value);
}

// Field reader that rejects missing, mistyped and unexpected keys.
class Reader {
public:
    Reader(const json& object, std::string context) : object_(object), context_(std::move(context)) {
        if (!object_.is_object()) bad(context_, "expected an object");
    }

    const json& raw(const std::string& key) {
        auto it = object_.find(key);
        if (it == object_.end()) bad(context_, "missing field '" + key + "'");
        used_.insert(key);
        return *it;
    }
    bool has(const std::string& key) const { return object_.contains(key); }

    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) bad(context_, "field '" + key + "' must be a string");
        return v.get<std::string>();
    }
    std::optional<std::string> optional_str(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return str(key);
    }
    BigInt big(const std::string& key) {
        try {
            return from_hex(str(key));
        } catch (const Error& e) {
            bad(context_, "field '" + key + "': " + e.what());
        }
    }
    std::uint64_t u64(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_unsigned()) bad(context_, "field '" + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }
    std::int64_t i64(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) bad(context_, "field '" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }
    std::uint32_t u32(const std::string& key) {
        std::uint64_t v = u64(key);
        if (v > UINT32_MAX) bad(context_, "field '" + key + "' exceeds 32 bits");
        return static_cast<std::uint32_t>(v);
    }
    const json& array(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) bad(context_, "field '" + key + "' must be an array");
        return v;
    }
    const json& object(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_object()) bad(context_, "field '" + key + "' must be an object");
        return v;
    }
    void finish() const {
        for (const auto& [key, value] : object_.items()) {
            if (!used_.contains(key)) bad(context_, "unexpected field '" + key + "'");
        }
    }
    const std::string& context() const { return context_; }

private:
    const json& object_;
    std::string context_;
    std::set<std::string> used_;
};

std::uint32_t element_u32(const json& v, const std::string& context) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > UINT32_MAX) {
        bad(context, "expected a 32-bit unsigned integer element");
    }
    return v.get<std::uint32_t>();
}

BigInt element_big(const json& v, const std::string& context) {
    if (!v.is_string()) bad(context, "expected a hex string element");
    try {
        return from_hex(v.get<std::string>());
    } catch (const Error& e) {
        bad(context, e.what());
    }
}

// ---- shared pieces ------------------------------------------------------

json tags_json(const CoinTags& tags) {
    json out = json::object();
    if (tags.vendor_id) out["vendor_id"] = *tags.vendor_id;
    if (tags.customer_id) out["customer_id"] = *tags.customer_id;
    return out;
}

CoinTags tags_from(const json& j, const std::string& context) {
    Reader r(j, context + ".tags");
    CoinTags tags{r.optional_str("vendor_id"), r.optional_str("customer_id")};
    r.finish();
    return tags;
}

json coin_id_json(const CoinId& id) {
    return {{"root_id", id.root_id}, {"exponent_index", id.exponent_index}};
}

CoinId coin_id_from(const json& j, const std::string& context) {
    Reader r(j, context);
    CoinId id{r.str("root_id"), r.u32("exponent_index")};
    r.finish();
    return id;
}

json exponents_json(const ExponentSet& set) {
    json out = json::array();
    for (const auto& c : set.values) out.push_back(hex(c));
    return out;
}

ExponentSet exponents_from(const json& j, const std::string& context) {
    ExponentSet out;
    for (const auto& v : j) out.values.push_back(element_big(v, context + ".exponents"));
    return out;
}

json index_json(const NodeIndex& index) {
    return json(index.k);
}

NodeIndex index_from(const json& j, const std::string& context) {
    if (!j.is_array()) bad(context, "index must be an array");
    NodeIndex out;
    for (const auto& v : j) out.k.push_back(element_u32(v, context + ".index"));
    return out;
}

json counter_json(const OpCounter& c) {
    return {{"modexp", c.modexp}, {"modmul", c.modmul}};
}

OpCounter counter_from(const json& j, const std::string& context) {
    Reader r(j, context);
    OpCounter out{r.u64("modexp"), r.u64("modmul")};
    r.finish();
    return out;
}

template <class F>
void guarded(const std::string& context, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        if (e.code() == Errc::format) throw;
        bad(context, std::string("invariant violated: ") + e.what());
    }
}

// ---- per-type codecs ----------------------------------------------------

template <class T>
struct Codec;

template <>
struct Codec<TrapdoorModulus> {
    static constexpr std::string_view name = "mdhc.trapdoor_modulus";
    static json to(const TrapdoorModulus& v) {
        return {{"p", hex(v.p)}, {"q", hex(v.q)}, {"modulus", hex(v.modulus)},
                {"totient", hex(v.totient)}, {"bit_length", v.bit_length}};
    }
    static TrapdoorModulus from(const json& j) {
        Reader r(j, std::string(name));
        TrapdoorModulus v;
        v.p = r.big("p");
        v.q = r.big("q");
        v.modulus = r.big("modulus");
        v.totient = r.big("totient");
        v.bit_length = r.u64("bit_length");
        r.finish();
        if (v.modulus != v.p * v.q) bad(r.context(), "modulus != p*q");
        if (v.totient != (v.p - 1) * (v.q - 1)) bad(r.context(), "totient != (p-1)(q-1)");
        if (v.bit_length != bit_length(v.p)) bad(r.context(), "bit_length does not match p");
        if (v.p == v.q) bad(r.context(), "p == q");
        if (!is_safe_prime(v.p) || !is_safe_prime(v.q)) bad(r.context(), "p and q must be safe primes");
        return v;
    }
};

template <>
struct Codec<PublicParams> {
    static constexpr std::string_view name = "mdhc.public_params";
    static json to(const PublicParams& v) {
        return {{"modulus", hex(v.modulus)}, {"exponents", exponents_json(v.exponents)}};
    }
    static PublicParams from(const json& j) {
        Reader r(j, std::string(name));
        PublicParams v{r.big("modulus"), exponents_from(r.array("exponents"), r.context())};
        r.finish();
        guarded(r.context(), [&] { validate_exponents(v.exponents); });
        if (v.modulus < 5) bad(r.context(), "modulus too small");
        return v;
    }
};

template <>
struct Codec<ChainParams> {
    static constexpr std::string_view name = "mdhc.chain_params";
    static json to(const ChainParams& v) {
        return {{"modulus", hex(v.modulus)}, {"exponents", exponents_json(v.exponents)}, {"sizes", v.sizes}};
    }
    static ChainParams from(const json& j) {
        Reader r(j, std::string(name));
        ChainParams v;
        v.modulus = r.big("modulus");
        v.exponents = exponents_from(r.array("exponents"), r.context());
        for (const auto& n : r.array("sizes")) v.sizes.push_back(element_u32(n, r.context() + ".sizes"));
        r.finish();
        guarded(r.context(), [&] { v.validate(); });
        return v;
    }
};

template <>
struct Codec<Node> {
    static constexpr std::string_view name = "mdhc.node";
    static json to(const Node& v) { return {{"index", index_json(v.index)}, {"value", hex(v.value)}}; }
    static Node from(const json& j) {
        Reader r(j, std::string(name));
        Node v{index_from(r.array("index"), r.context()), r.big("value")};
        r.finish();
        return v;
    }
};

template <>
struct Codec<SecretChain> {
    static constexpr std::string_view name = "mdhc.secret_chain";
    static json to(const SecretChain& v) {
        json out{{"params", Codec<ChainParams>::to(v.params)}, {"start", hex(v.start)}};
        if (v.trapdoor) out["trapdoor"] = Codec<TrapdoorModulus>::to(*v.trapdoor);
        return out;
    }
    static SecretChain from(const json& j) {
        Reader r(j, std::string(name));
        SecretChain v;
        v.params = Codec<ChainParams>::from(r.object("params"));
        v.start = r.big("start");
        if (r.has("trapdoor")) v.trapdoor = Codec<TrapdoorModulus>::from(r.object("trapdoor"));
        r.finish();
        guarded(r.context(), [&] { v.validate(); });
        if (v.trapdoor && v.trapdoor->modulus != v.params.modulus) bad(r.context(), "trapdoor modulus mismatch");
        return v;
    }
};

template <>
struct Codec<CoinS1> {
    static constexpr std::string_view name = "mdhc.coin_s1";
    static json to(const CoinS1& v) {
        return {{"value", hex(v.value)},         {"exponent", hex(v.exponent)},
                {"exponent_index", v.exponent_index}, {"root_id", v.root_id},
                {"batch_id", v.batch_id},        {"tags", tags_json(v.tags)}};
    }
    static CoinS1 from(const json& j) {
        Reader r(j, std::string(name));
        CoinS1 v;
        v.value = r.big("value");
        v.exponent = r.big("exponent");
        v.exponent_index = r.u32("exponent_index");
        v.root_id = r.str("root_id");
        v.batch_id = r.str("batch_id");
        v.tags = tags_from(r.object("tags"), r.context());
        r.finish();
        if (v.root_id.empty()) bad(r.context(), "root_id must not be empty");
        return v;
    }
};

template <>
struct Codec<BatchS1> {
    static constexpr std::string_view name = "mdhc.batch_s1";
    static json to(const BatchS1& v) {
        json coins = json::array();
        for (const auto& c : v.coins) coins.push_back(Codec<CoinS1>::to(c));
        return {{"batch_id", v.batch_id}, {"root_id", v.root_id}, {"root", hex(v.root)},
                {"coins", coins},         {"cost", counter_json(v.cost)}};
    }
    static BatchS1 from(const json& j) {
        Reader r(j, std::string(name));
        BatchS1 v;
        v.batch_id = r.str("batch_id");
        v.root_id = r.str("root_id");
        v.root = r.big("root");
        for (const auto& c : r.array("coins")) v.coins.push_back(Codec<CoinS1>::from(c));
        v.cost = counter_from(r.object("cost"), r.context() + ".cost");
        r.finish();
        if (root_id_of(v.root) != v.root_id) bad(r.context(), "root_id does not match root");
        for (const auto& c : v.coins) {
            if (c.root_id != v.root_id || c.batch_id != v.batch_id) bad(r.context(), "coin does not belong to batch");
        }
        return v;
    }
};

template <>
struct Codec<CoinChainHandle> {
    static constexpr std::string_view name = "mdhc.chain_handle";
    static json to(const CoinChainHandle& v) {
        return {{"start", hex(v.start)},     {"exponent", hex(v.exponent)}, {"exponent_index", v.exponent_index},
                {"length", v.length},        {"root_id", v.root_id},        {"tags", tags_json(v.tags)}};
    }
    static CoinChainHandle from(const json& j) {
        Reader r(j, std::string(name));
        CoinChainHandle v;
        v.start = r.big("start");
        v.exponent = r.big("exponent");
        v.exponent_index = r.u32("exponent_index");
        v.length = r.u32("length");
        v.root_id = r.str("root_id");
        v.tags = tags_from(r.object("tags"), r.context());
        r.finish();
        if (v.length < 1) bad(r.context(), "chain length must be at least 1");
        return v;
    }
};

template <>
struct Codec<ChainCoin> {
    static constexpr std::string_view name = "mdhc.chain_coin";
    static json to(const ChainCoin& v) {
        return {{"value", hex(v.value)},  {"exponent", hex(v.exponent)}, {"exponent_index", v.exponent_index},
                {"position", v.position}, {"root_id", v.root_id}};
    }
    static ChainCoin from(const json& j) {
        Reader r(j, std::string(name));
        ChainCoin v;
        v.value = r.big("value");
        v.exponent = r.big("exponent");
        v.exponent_index = r.u32("exponent_index");
        v.position = r.u32("position");
        v.root_id = r.str("root_id");
        r.finish();
        if (v.position < 1) bad(r.context(), "coin positions start at 1");
        return v;
    }
};

template <>
struct Codec<SignaturePublicKey> {
    static constexpr std::string_view name = "mdhc.signature_public_key";
    static json to(const SignaturePublicKey& v) {
        return {{"modulus", hex(v.modulus)}, {"exponent", hex(v.exponent)}};
    }
    static SignaturePublicKey from(const json& j) {
        Reader r(j, std::string(name));
        SignaturePublicKey v{r.big("modulus"), r.big("exponent")};
        r.finish();
        return v;
    }
};

template <>
struct Codec<SignatureKeypair> {
    static constexpr std::string_view name = "mdhc.signature_keypair";
    static json to(const SignatureKeypair& v) {
        return {{"public_key", Codec<SignaturePublicKey>::to(v.public_key)},
                {"private_exponent", hex(v.private_exponent)}};
    }
    static SignatureKeypair from(const json& j) {
        Reader r(j, std::string(name));
        SignatureKeypair v{Codec<SignaturePublicKey>::from(r.object("public_key")), r.big("private_exponent")};
        r.finish();
        return v;
    }
};

template <>
struct Codec<PaywordCommitment> {
    static constexpr std::string_view name = "mdhc.payword_commitment";
    static json to(const PaywordCommitment& v) {
        return {{"root", hex(v.root)},
                {"params", Codec<ChainParams>::to(v.params)},
                {"purpose", std::string(purpose_name(v.purpose))},
                {"vendor_bindings", v.vendor_bindings},
                {"customer", v.customer},
                {"signature", bytes_to_hex(v.signature)}};
    }
    static PaywordCommitment from(const json& j) {
        Reader r(j, std::string(name));
        PaywordCommitment v;
        v.root = r.big("root");
        v.params = Codec<ChainParams>::from(r.object("params"));
        v.purpose = purpose_from_name(r.str("purpose"));
        for (const auto& b : r.array("vendor_bindings")) {
            if (!b.is_string()) bad(r.context(), "vendor bindings must be strings");
            v.vendor_bindings.push_back(b.get<std::string>());
        }
        v.customer = r.str("customer");
        std::string sig = r.str("signature");
        r.finish();
        if (sig.size() % 2 != 0 || sig.find_first_not_of("0123456789abcdef") != std::string::npos) {
            bad(r.context(), "signature must be lowercase hex bytes");
        }
        v.signature = hex_to_bytes(sig);
        if (v.purpose == CommitmentPurpose::multivendor && v.vendor_bindings.size() != v.params.dimensions()) {
            bad(r.context(), "multivendor bindings must cover every dimension");
        }
        return v;
    }
};

template <>
struct Codec<SpendState> {
    static constexpr std::string_view name = "mdhc.spend_state";
    static json to(const SpendState& v) { return {{"index", index_json(v.index)}, {"total", v.total}}; }
    static SpendState from(const json& j) {
        Reader r(j, std::string(name));
        SpendState v{index_from(r.array("index"), r.context()), r.u64("total")};
        r.finish();
        return v;
    }
};

json roots_json(const std::map<std::string, BigInt>& roots) {
    json out = json::object();
    for (const auto& [id, root] : roots) out[id] = hex(root);
    return out;
}

std::map<std::string, BigInt> roots_from(const json& j, const std::string& context) {
    std::map<std::string, BigInt> out;
    for (const auto& [id, value] : j.items()) {
        BigInt root = element_big(value, context + ".roots");
        if (root_id_of(root) != id) bad(context, "root id " + id + " does not match its value");
        out.emplace(id, root);
    }
    return out;
}

json id_set_json(const std::set<CoinId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(coin_id_json(id));
    return out;
}

std::set<CoinId> id_set_from(const json& j, const std::string& context) {
    std::set<CoinId> out;
    for (const auto& v : j) {
        if (!out.insert(coin_id_from(v, context)).second) bad(context, "duplicate coin id");
    }
    return out;
}

template <>
struct Codec<RegistryS1> {
    static constexpr std::string_view name = "mdhc.registry_s1";
    static json to(const RegistryS1& v) {
        json tags = json::array();
        for (const auto& [id, t] : v.tags) tags.push_back({{"coin", coin_id_json(id)}, {"tags", tags_json(t)}});
        return {{"roots", roots_json(v.roots)},
                {"unspent", id_set_json(v.unspent)},
                {"deposited", id_set_json(v.deposited)},
                {"refunded", id_set_json(v.refunded)},
                {"tags", tags}};
    }
    static RegistryS1 from(const json& j) {
        Reader r(j, std::string(name));
        RegistryS1 v;
        v.roots = roots_from(r.object("roots"), r.context());
        v.unspent = id_set_from(r.array("unspent"), r.context() + ".unspent");
        v.deposited = id_set_from(r.array("deposited"), r.context() + ".deposited");
        v.refunded = id_set_from(r.array("refunded"), r.context() + ".refunded");
        for (const auto& t : r.array("tags")) {
            Reader tr(t, r.context() + ".tags");
            v.tags.emplace(coin_id_from(tr.object("coin"), tr.context()), tags_from(tr.object("tags"), tr.context()));
            tr.finish();
        }
        r.finish();
        for (const auto& id : v.unspent) {
            if (v.deposited.contains(id) || v.refunded.contains(id)) bad(r.context(), "coin both unspent and spent");
        }
        for (const auto* set : {&v.unspent, &v.deposited, &v.refunded}) {
            for (const auto& id : *set) {
                if (!v.roots.contains(id.root_id)) bad(r.context(), "coin references an unpublished root");
            }
        }
        return v;
    }
};

template <>
struct Codec<RegistryS2> {
    static constexpr std::string_view name = "mdhc.registry_s2";
    static json to(const RegistryS2& v) {
        json chains = json::array();
        for (const auto& [key, info] : v.chains) {
            chains.push_back({{"chain", coin_id_json(key)}, {"length", info.length}, {"tags", tags_json(info.tags)}});
        }
        json claimed = json::array();
        for (const auto& [key, vendor] : v.claimed_by) claimed.push_back({{"chain", coin_id_json(key)}, {"vendor", vendor}});
        json redeemed = json::array();
        for (const auto& [key, j] : v.redeemed) redeemed.push_back({{"chain", coin_id_json(key)}, {"position", j}});
        return {{"roots", roots_json(v.roots)}, {"chains", chains}, {"unused", id_set_json(v.unused)},
                {"claimed_by", claimed},        {"redeemed", redeemed}};
    }
    static RegistryS2 from(const json& j) {
        Reader r(j, std::string(name));
        RegistryS2 v;
        v.roots = roots_from(r.object("roots"), r.context());
        for (const auto& c : r.array("chains")) {
            Reader cr(c, r.context() + ".chains");
            ChainKey key = coin_id_from(cr.object("chain"), cr.context());
            ChainInfo info{cr.u32("length"), tags_from(cr.object("tags"), cr.context())};
            cr.finish();
            v.chains.emplace(key, info);
        }
        v.unused = id_set_from(r.array("unused"), r.context() + ".unused");
        for (const auto& c : r.array("claimed_by")) {
            Reader cr(c, r.context() + ".claimed_by");
            ChainKey key = coin_id_from(cr.object("chain"), cr.context());
            v.claimed_by.emplace(key, cr.str("vendor"));
            cr.finish();
        }
        for (const auto& c : r.array("redeemed")) {
            Reader cr(c, r.context() + ".redeemed");
            ChainKey key = coin_id_from(cr.object("chain"), cr.context());
            v.redeemed.emplace(key, cr.u32("position"));
            cr.finish();
        }
        r.finish();
        for (const auto& key : v.unused) {
            if (v.claimed_by.contains(key)) bad(r.context(), "chain both unused and claimed");
            if (!v.chains.contains(key)) bad(r.context(), "unused chain is unknown");
        }
        return v;
    }
};

template <>
struct Codec<BankState> {
    static constexpr std::string_view name = "mdhc.bank_state";
    static json to(const BankState& v) {
        return {{"s1", Codec<RegistryS1>::to(v.s1)},
                {"s2", Codec<RegistryS2>::to(v.s2)},
                {"balances", v.balances},
                {"settled", v.settled}};
    }
    static BankState from(const json& j) {
        Reader r(j, std::string(name));
        BankState v;
        v.s1 = Codec<RegistryS1>::from(r.object("s1"));
        v.s2 = Codec<RegistryS2>::from(r.object("s2"));
        for (const auto& [account, balance] : r.object("balances").items()) {
            if (!balance.is_number_integer()) bad(r.context(), "balances must be integers");
            v.balances.emplace(account, balance.get<std::int64_t>());
        }
        for (const auto& s : r.array("settled")) {
            if (!s.is_string()) bad(r.context(), "settled ids must be strings");
            v.settled.insert(s.get<std::string>());
        }
        r.finish();
        return v;
    }
};

template <>
struct Codec<CustomerWallet> {
    static constexpr std::string_view name = "mdhc.customer_wallet";
    static json to(const CustomerWallet& v) {
        json coins = json::array();
        for (const auto& c : v.coins) coins.push_back(Codec<CoinS1>::to(c));
        json chains = json::array();
        for (const auto& c : v.chains) {
            chains.push_back({{"handle", Codec<CoinChainHandle>::to(c.handle)}, {"next_position", c.next_position}});
        }
        return {{"name", v.name}, {"coins", coins}, {"chains", chains}};
    }
    static CustomerWallet from(const json& j) {
        Reader r(j, std::string(name));
        CustomerWallet v;
        v.name = r.str("name");
        for (const auto& c : r.array("coins")) v.coins.push_back(Codec<CoinS1>::from(c));
        for (const auto& c : r.array("chains")) {
            Reader cr(c, r.context() + ".chains");
            ChainSpend spend{Codec<CoinChainHandle>::from(cr.object("handle")), cr.u32("next_position")};
            cr.finish();
            if (spend.next_position < 1 || spend.next_position > spend.handle.length + 1) {
                bad(cr.context(), "next_position must lie in 1..n+1");
            }
            v.chains.push_back(std::move(spend));
        }
        r.finish();
        return v;
    }
};

template <>
struct Codec<VendorWallet> {
    static constexpr std::string_view name = "mdhc.vendor_wallet";
    static json to(const VendorWallet& v) {
        json received = json::array();
        for (const auto& c : v.received) received.push_back(Codec<CoinS1>::to(c));
        json heads = json::array();
        for (const auto& c : v.chain_heads) heads.push_back(Codec<ChainCoin>::to(c));
        return {{"name", v.name}, {"received", received}, {"chain_heads", heads}, {"redeemed", v.redeemed}};
    }
    static VendorWallet from(const json& j) {
        Reader r(j, std::string(name));
        VendorWallet v;
        v.name = r.str("name");
        for (const auto& c : r.array("received")) v.received.push_back(Codec<CoinS1>::from(c));
        for (const auto& c : r.array("chain_heads")) v.chain_heads.push_back(Codec<ChainCoin>::from(c));
        for (const auto& [key, pos] : r.object("redeemed").items()) {
            v.redeemed.emplace(key, element_u32(pos, r.context() + ".redeemed"));
        }
        r.finish();
        return v;
    }
};

template <>
struct Codec<Payment> {
    static constexpr std::string_view name = "mdhc.payment";
    static json to(const Payment& v) {
        json out{{"customer", v.customer}, {"vendor", v.vendor}};
        if (const auto* coin = std::get_if<CoinS1>(&v.item)) {
            out["scheme"] = "s1";
            out["coin"] = Codec<CoinS1>::to(*coin);
        } else {
            out["scheme"] = "s2";
            out["coin"] = Codec<ChainCoin>::to(std::get<ChainCoin>(v.item));
        }
        return out;
    }
    static Payment from(const json& j) {
        Reader r(j, std::string(name));
        Payment v;
        v.customer = r.str("customer");
        v.vendor = r.str("vendor");
        std::string scheme = r.str("scheme");
        if (scheme == "s1") {
            v.item = Codec<CoinS1>::from(r.object("coin"));
        } else if (scheme == "s2") {
            v.item = Codec<ChainCoin>::from(r.object("coin"));
        } else {
            bad(r.context(), "scheme must be s1 or s2");
        }
        r.finish();
        return v;
    }
};

// ---- ledger events ------------------------------------------------------

json indices_json(const std::vector<std::uint32_t>& v) { return json(v); }

std::vector<std::uint32_t> indices_from(const json& j, const std::string& context) {
    std::vector<std::uint32_t> out;
    for (const auto& v : j) out.push_back(element_u32(v, context));
    return out;
}

json event_data(const Event& event) {
    return std::visit(
        [](const auto& e) -> json {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, MintS1Event>) {
                return {{"batch_id", e.batch_id}, {"root_id", e.root_id}, {"root", hex(e.root)},
                        {"exponent_indices", indices_json(e.exponent_indices)}, {"tags", tags_json(e.tags)}};
            } else if constexpr (std::is_same_v<E, DepositS1Event>) {
                return {{"coin", coin_id_json(e.coin)}, {"vendor", e.vendor}};
            } else if constexpr (std::is_same_v<E, RefundS1Event>) {
                json coins = json::array();
                for (const auto& id : e.coins) coins.push_back(coin_id_json(id));
                return {{"coins", coins}, {"customer", e.customer}};
            } else if constexpr (std::is_same_v<E, MintS2Event>) {
                return {{"root_id", e.root_id}, {"root", hex(e.root)}, {"length", e.length},
                        {"exponent_indices", indices_json(e.exponent_indices)}, {"tags", tags_json(e.tags)}};
            } else if constexpr (std::is_same_v<E, ClaimS2Event>) {
                return {{"chain", coin_id_json(e.chain)}, {"vendor", e.vendor}};
            } else if constexpr (std::is_same_v<E, RedeemS2Event>) {
                return {{"chain", coin_id_json(e.chain)}, {"vendor", e.vendor}, {"position", e.position},
                        {"credited", e.credited}};
            } else {
                return {{"commitment_id", e.commitment_id}, {"customer", e.customer}, {"credits", e.credits},
                        {"debit", e.debit}};
            }
        },
        event);
}

Event event_from(const std::string& op, const json& data) {
    Reader r(data, "ledger." + op);
    Event out;
    if (op == "mint_s1") {
        out = MintS1Event{r.str("batch_id"), r.str("root_id"), r.big("root"),
                          indices_from(r.array("exponent_indices"), r.context()), tags_from(r.object("tags"), r.context())};
    } else if (op == "deposit_s1") {
        out = DepositS1Event{coin_id_from(r.object("coin"), r.context()), r.str("vendor")};
    } else if (op == "refund_s1") {
        RefundS1Event e;
        for (const auto& c : r.array("coins")) e.coins.push_back(coin_id_from(c, r.context()));
        e.customer = r.str("customer");
        out = e;
    } else if (op == "mint_s2") {
        MintS2Event e;
        e.root_id = r.str("root_id");
        e.root = r.big("root");
        e.length = r.u32("length");
        e.exponent_indices = indices_from(r.array("exponent_indices"), r.context());
        e.tags = tags_from(r.object("tags"), r.context());
        out = e;
    } else if (op == "claim_s2") {
        out = ClaimS2Event{coin_id_from(r.object("chain"), r.context()), r.str("vendor")};
    } else if (op == "redeem_s2") {
        RedeemS2Event e;
        e.chain = coin_id_from(r.object("chain"), r.context());
        e.vendor = r.str("vendor");
        e.position = r.u32("position");
        e.credited = r.u32("credited");
        out = e;
    } else if (op == "settle") {
        SettleEvent e;
        e.commitment_id = r.str("commitment_id");
        e.customer = r.str("customer");
        for (const auto& [vendor, amount] : r.object("credits").items()) {
            if (!amount.is_number_unsigned()) bad(r.context(), "credits must be non-negative integers");
            e.credits.emplace(vendor, amount.get<std::uint64_t>());
        }
        e.debit = r.u64("debit");
        out = e;
    } else {
        bad("ledger", "unknown record type '" + op + "'");
    }
    r.finish();
    return out;
}

json parse(std::string_view text, std::string_view context) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::format, std::string(context) + ": " + e.what());
    }
}

}  // namespace

template <class T>
std::string_view schema_name() {
    return Codec<T>::name;
}

template <class T>
std::string encode(const T& value) {
    json doc{{"schema", std::string(Codec<T>::name)}, {"version", kFormatVersion}, {"payload", Codec<T>::to(value)}};
    return doc.dump(2) + "\n";
}

template <class T>
T decode(std::string_view text) {
    json doc = parse(text, Codec<T>::name);
    try {
        Reader r(doc, "document");
        std::string schema = r.str("schema");
        if (schema != Codec<T>::name) {
            bad("document", "schema '" + schema + "' where '" + std::string(Codec<T>::name) + "' was expected");
        }
        std::uint64_t version = r.u64("version");
        if (version != kFormatVersion) bad("document", "unsupported version " + std::to_string(version));
        T value = Codec<T>::from(r.raw("payload"));
        r.finish();
        return value;
    } catch (const json::exception& e) {
        throw Error(Errc::format, std::string(Codec<T>::name) + ": " + e.what());
    }
}

#define MDHC_INSTANTIATE(T)                         \
    template std::string encode<T>(const T&);       \
    template T decode<T>(std::string_view);         \
    template std::string_view schema_name<T>();

MDHC_INSTANTIATE(TrapdoorModulus)
MDHC_INSTANTIATE(PublicParams)
MDHC_INSTANTIATE(ChainParams)
MDHC_INSTANTIATE(Node)
MDHC_INSTANTIATE(SecretChain)
MDHC_INSTANTIATE(CoinS1)
MDHC_INSTANTIATE(BatchS1)
MDHC_INSTANTIATE(CoinChainHandle)
MDHC_INSTANTIATE(ChainCoin)
MDHC_INSTANTIATE(PaywordCommitment)
MDHC_INSTANTIATE(SignaturePublicKey)
MDHC_INSTANTIATE(SignatureKeypair)
MDHC_INSTANTIATE(SpendState)
MDHC_INSTANTIATE(RegistryS1)
MDHC_INSTANTIATE(RegistryS2)
MDHC_INSTANTIATE(BankState)
MDHC_INSTANTIATE(CustomerWallet)
MDHC_INSTANTIATE(VendorWallet)
MDHC_INSTANTIATE(Payment)

#undef MDHC_INSTANTIATE

std::string encode_record(const LedgerRecord& record) {
    json line{{"seq", record.seq}, {"op", std::string(event_name(record.event))}, {"data", event_data(record.event)}};
    return line.dump();
}

LedgerRecord decode_record(std::string_view line) {
    json doc = parse(line, "ledger record");
    try {
        Reader r(doc, "ledger record");
        LedgerRecord out;
        out.seq = r.u64("seq");
        std::string op = r.str("op");
        out.event = event_from(op, r.object("data"));
        r.finish();
        return out;
    } catch (const json::exception& e) {
        throw Error(Errc::format, std::string("ledger record: ") + e.what());
    }
}

std::vector<LedgerRecord> read_ledger(const std::filesystem::path& path) {
    std::vector<LedgerRecord> out;
    if (!std::filesystem::exists(path)) {
        return out;
    }
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io, "cannot open ledger " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(decode_record(line));
        } catch (const Error& e) {
            throw Error(Errc::replay, "ledger line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

BankState replay(std::span<const LedgerRecord> records) {
    BankState state;
    std::uint64_t expected = 1;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& record = records[i];
        if (record.seq != expected) {
            throw Error(Errc::replay, "record " + std::to_string(i + 1) + ": sequence number " +
                                          std::to_string(record.seq) + " where " + std::to_string(expected) +
                                          " was expected (gap or duplicate)");
        }
        try {
            apply_event(state, record.event);
        } catch (const Error& e) {
            throw Error(Errc::replay, "record " + std::to_string(i + 1) + ": " + e.what());
        }
        ++expected;
    }
    return state;
}

LedgerWriter::LedgerWriter(std::filesystem::path path) : path_(std::move(path)) {
    auto existing = read_ledger(path_);
    if (!existing.empty()) {
        seq_ = existing.back().seq;
    }
}

void LedgerWriter::append(const Event& event) {
    std::ofstream out(path_, std::ios::app);
    if (!out) {
        throw Error(Errc::io, "cannot append to ledger " + path_.string());
    }
    out << encode_record(LedgerRecord{seq_ + 1, event}) << '\n';
    out.flush();
    if (!out) {
        throw Error(Errc::io, "write to ledger " + path_.string() + " failed");
    }
    ++seq_;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io, "cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(Errc::io, "cannot write " + tmp.string());
        }
        out << contents;
        if (!out) {
            throw Error(Errc::io, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(Errc::io, "cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

}  // namespace mdhc
