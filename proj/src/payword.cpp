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

#include "mdhc/payword.hpp"

#include "mdhc/errors.hpp"

#include <set>

namespace mdhc {

namespace {

constexpr std::string_view kCommitmentTag = "mdhc-payword-commitment-v1";

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > UINT64_MAX / b) {
        throw Error(Errc::capacity_exceeded, "denomination capacity exceeds 64 bits");
    }
    return a * b;
}

void put_field(Bytes& out, std::span<const std::uint8_t> field) {
    auto len = static_cast<std::uint32_t>(field.size());
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(len >> shift));
    }
    out.insert(out.end(), field.begin(), field.end());
}

void put_field(Bytes& out, std::string_view text) {
    put_field(out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void put_u32(Bytes& out, std::uint32_t value) {
    std::uint8_t raw[4] = {static_cast<std::uint8_t>(value >> 24), static_cast<std::uint8_t>(value >> 16),
                           static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)};
    put_field(out, std::span<const std::uint8_t>(raw, 4));
}

void check_key(const SignaturePublicKey& key) {
    if (bit_length(key.modulus) <= 256 || key.exponent < 3 || mpz_even_p(key.exponent.get_mpz_t())) {
        throw Error(Errc::invalid_argument, "malformed signature key");
    }
}

DenominationSchedule schedule_of(const ChainParams& params) {
    if (params.sizes.empty()) {
        throw Error(Errc::invalid_argument, "chain has no dimensions");
    }
    for (auto n : params.sizes) {
        if (n != params.sizes.front()) {
            throw Error(Errc::invalid_argument, "denominated chains need equal dimension sizes");
        }
    }
    return {params.sizes.front(), params.sizes.size()};
}

bool valid_index(const ChainParams& params, const NodeIndex& index) {
    try {
        check_index(params, index);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

std::uint64_t DenominationSchedule::capacity() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total = checked_mul(total, base());
    }
    return total - 1;
}

std::uint64_t DenominationSchedule::weight(std::size_t i) const {
    std::uint64_t w = 1;
    for (std::size_t j = 0; j < i; ++j) {
        w = checked_mul(w, base());
    }
    return w;
}

std::uint64_t value_of_index(const DenominationSchedule& schedule, const NodeIndex& index) {
    if (index.size() != schedule.m) {
        throw Error(Errc::out_of_range, "index has " + std::to_string(index.size()) + " digits, expected " +
                                            std::to_string(schedule.m));
    }
    std::uint64_t value = 0;
    std::uint64_t weight = 1;
    for (std::size_t i = 0; i < schedule.m; ++i) {
        if (index[i] > schedule.n) {
            throw Error(Errc::out_of_range, "digit " + std::to_string(index[i]) + " exceeds " +
                                                std::to_string(schedule.n));
        }
        value += checked_mul(index[i], weight);
        if (i + 1 < schedule.m) weight = checked_mul(weight, schedule.base());
    }
    return value;
}

NodeIndex index_of_value(const DenominationSchedule& schedule, std::uint64_t value) {
    if (value > schedule.capacity()) {
        throw Error(Errc::capacity_exceeded, "value " + std::to_string(value) + " exceeds capacity " +
                                                 std::to_string(schedule.capacity()));
    }
    NodeIndex out = NodeIndex::zeros(schedule.m);
    for (std::size_t i = 0; i < schedule.m; ++i) {
        out.k[i] = static_cast<std::uint32_t>(value % schedule.base());
        value /= schedule.base();
    }
    return out;
}

SignatureKeypair generate_signature_keypair(std::size_t modulus_bits, SeededStream& rng) {
    if (modulus_bits < 320) {
        throw Error(Errc::invalid_argument, "signature modulus must have at least 320 bits");
    }
    const BigInt e = 65537;
    for (;;) {
        BigInt p = gen_prime(modulus_bits / 2, rng);
        BigInt q = gen_prime(modulus_bits - modulus_bits / 2, rng);
        BigInt n = p * q;
        BigInt phi = (p - 1) * (q - 1);
        if (p == q || bit_length(n) != modulus_bits || gcd(e, phi) != 1) {
            continue;
        }
        return SignatureKeypair{{n, e}, mod_inv(e, phi)};
    }
}

Bytes sign(const SignatureKeypair& key, std::span<const std::uint8_t> message) {
    check_key(key.public_key);
    BigInt digest = from_bytes(sha256(message));
    BigInt signature = mod_pow(digest, key.private_exponent, key.public_key.modulus);
    Bytes raw = to_bytes(signature);
    Bytes out((bit_length(key.public_key.modulus) + 7) / 8 - raw.size(), 0);
    out.insert(out.end(), raw.begin(), raw.end());
    return out;
}

bool verify_signature(const SignaturePublicKey& key, std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature) {
    check_key(key);
    if (signature.size() != (bit_length(key.modulus) + 7) / 8) {
        return false;
    }
    BigInt s = from_bytes(signature);
    if (s >= key.modulus) {
        return false;
    }
    return mod_pow(s, key.exponent, key.modulus) == from_bytes(sha256(message));
}

std::string_view purpose_name(CommitmentPurpose purpose) noexcept {
    return purpose == CommitmentPurpose::denomination ? "denomination" : "multivendor";
}

CommitmentPurpose purpose_from_name(std::string_view name) {
    if (name == "denomination") return CommitmentPurpose::denomination;
    if (name == "multivendor") return CommitmentPurpose::multivendor;
    throw Error(Errc::format, "unknown commitment purpose '" + std::string(name) + "'");
}

Bytes canonical_encoding(const PaywordCommitment& commitment) {
    Bytes out;
    put_field(out, kCommitmentTag);
    put_field(out, to_bytes(commitment.root));
    put_field(out, to_bytes(commitment.params.modulus));
    put_u32(out, static_cast<std::uint32_t>(commitment.params.dimensions()));
    for (const auto& c : commitment.params.exponents.values) {
        put_field(out, to_bytes(c));
    }
    for (auto n : commitment.params.sizes) {
        put_u32(out, n);
    }
    put_field(out, purpose_name(commitment.purpose));
    put_u32(out, static_cast<std::uint32_t>(commitment.vendor_bindings.size()));
    for (const auto& vendor : commitment.vendor_bindings) {
        put_field(out, vendor);
    }
    put_field(out, commitment.customer);
    return out;
}

PaywordCommitment commit(const SignatureKeypair& key, const std::string& customer,
                         const SecretChain& chain, CommitmentPurpose purpose,
                         std::vector<std::string> vendor_bindings, OpCounter& counter) {
    chain.validate();
    if (purpose == CommitmentPurpose::multivendor) {
        if (vendor_bindings.size() != chain.params.dimensions()) {
            throw Error(Errc::invalid_argument, "every dimension needs exactly one vendor");
        }
        std::set<std::string> distinct(vendor_bindings.begin(), vendor_bindings.end());
        if (distinct.size() != vendor_bindings.size() || distinct.contains("")) {
            throw Error(Errc::invalid_argument, "vendor bindings must be distinct and non-empty");
        }
    } else {
        if (!vendor_bindings.empty()) {
            throw Error(Errc::invalid_argument, "denominated chains carry no vendor bindings");
        }
        schedule_of(chain.params).capacity();
    }
    PaywordCommitment out;
    out.root = root_naive(chain, counter).value;
    out.params = chain.params;
    out.purpose = purpose;
    out.vendor_bindings = std::move(vendor_bindings);
    out.customer = customer;
    out.signature = sign(key, canonical_encoding(out));
    return out;
}

bool verify_commitment(const PaywordCommitment& commitment, const SignaturePublicKey& key) {
    return verify_signature(key, canonical_encoding(commitment), commitment.signature);
}

SpendState initial_spend_state(std::size_t m) {
    return SpendState{NodeIndex::zeros(m), 0};
}

Payword pay_denominated(const SpendState& state, std::uint64_t amount, const SecretChain& chain,
                        OpCounter& counter) {
    DenominationSchedule schedule = schedule_of(chain.params);
    if (amount == 0) {
        throw Error(Errc::invalid_argument, "payment amount must be positive");
    }
    std::uint64_t capacity = schedule.capacity();
    if (state.total > capacity || amount > capacity - state.total) {
        throw Error(Errc::capacity_exceeded, "payment of " + std::to_string(amount) + " exceeds remaining " +
                                                 std::to_string(capacity - std::min(capacity, state.total)));
    }
    SpendState next{index_of_value(schedule, state.total + amount), state.total + amount};
    return Payword{node_at(chain, next.index, counter), next};
}

Outcome verify_denominated(const PaywordCommitment& commitment, const Node& node,
                           std::uint64_t claimed_total, OpCounter& counter) {
    if (!valid_index(commitment.params, node.index)) {
        return Outcome::invalid;
    }
    if (value_of_index(schedule_of(commitment.params), node.index) != claimed_total) {
        return Outcome::bad_total;
    }
    return verify_path_to_root(commitment.params, node, commitment.root, counter) ? Outcome::accept
                                                                                  : Outcome::bad_link;
}

Payword pay_vendor(const SpendState& state, std::size_t dim, const std::string& vendor,
                   const SecretChain& chain, const PaywordCommitment& commitment, OpCounter& counter) {
    if (commitment.purpose != CommitmentPurpose::multivendor) {
        throw Error(Errc::invalid_argument, "commitment is not a multi-vendor chain");
    }
    if (dim < 1 || dim > commitment.vendor_bindings.size()) {
        throw Error(Errc::out_of_range, "dimension " + std::to_string(dim) + " out of range");
    }
    if (commitment.vendor_bindings[dim - 1] != vendor) {
        throw Error(Errc::dimension_unbound, "dimension " + std::to_string(dim) + " is bound to '" +
                                                 commitment.vendor_bindings[dim - 1] + "', not '" + vendor + "'");
    }
    if (state.index[dim - 1] >= chain.params.sizes[dim - 1]) {
        throw Error(Errc::chain_exhausted, "dimension " + std::to_string(dim) + " is exhausted");
    }
    SpendState next = state;
    ++next.index.k[dim - 1];
    next.total = next.index.sum();
    return Payword{node_at(chain, next.index, counter), next};
}

static std::optional<std::size_t> bound_dimension(const PaywordCommitment& commitment, const std::string& vendor) {
    for (std::size_t i = 0; i < commitment.vendor_bindings.size(); ++i) {
        if (commitment.vendor_bindings[i] == vendor) return i + 1;
    }
    return std::nullopt;
}

PaywordVerifier::PaywordVerifier(PaywordCommitment commitment) : commitment_(std::move(commitment)) {
    verified_.emplace(NodeIndex::zeros(commitment_.params.dimensions()), commitment_.root);
}

Outcome PaywordVerifier::verify(const Node& node, OpCounter& counter) {
    if (!valid_index(commitment_.params, node.index)) {
        return Outcome::invalid;
    }
    if (auto hit = verified_.find(node.index); hit != verified_.end()) {
        return hit->second == node.value ? Outcome::accept : Outcome::bad_link;
    }
    const NodeIndex* best = nullptr;
    const BigInt* best_value = nullptr;
    for (const auto& [index, value] : verified_) {
        if (index.dominated_by(node.index) && (!best || index.sum() > best->sum())) {
            best = &index;
            best_value = &value;
        }
    }
    BigInt value = node.value;
    for (std::size_t d = 0; d < node.index.size(); ++d) {
        for (std::uint32_t s = (*best)[d]; s < node.index[d]; ++s) {
            value = apply_hash(commitment_.params, d + 1, value, counter);
        }
    }
    if (value != *best_value) {
        return Outcome::bad_link;
    }
    verified_.emplace(node.index, node.value);
    return Outcome::accept;
}

Settlement settle_multivendor(const PaywordCommitment& commitment, std::span<const Deposit> deposits,
                              OpCounter& counter) {
    Settlement out;
    if (commitment.purpose != CommitmentPurpose::multivendor || deposits.empty()) {
        return out;
    }
    PaywordVerifier verifier(commitment);
    const Deposit* top = nullptr;
    for (const auto& deposit : deposits) {
        if (!bound_dimension(commitment, deposit.vendor) || verifier.verify(deposit.node, counter) != Outcome::accept) {
            return out;
        }
        if (!top || deposit.node.index.sum() > top->node.index.sum()) {
            top = &deposit;
        }
    }
    for (const auto& deposit : deposits) {
        if (!deposit.node.index.dominated_by(top->node.index)) {
            out.outcome = Outcome::inconsistent;
            return out;
        }
    }
    out.outcome = Outcome::settled;
    out.settled_index = top->node.index;
    for (std::size_t i = 0; i < commitment.vendor_bindings.size(); ++i) {
        out.credits[commitment.vendor_bindings[i]] = top->node.index[i];
        out.debit += top->node.index[i];
    }
    return out;
}

Settlement settle_multivendor(Bank& bank, const PaywordCommitment& commitment,
                              const SignaturePublicKey& customer_key, std::span<const Deposit> deposits) {
    Settlement out;
    if (!verify_commitment(commitment, customer_key)) {
        out.outcome = Outcome::bad_signature;
        return out;
    }
    std::scoped_lock lock(bank.mutex());
    if (bank.state().settled.contains(commitment.id())) {
        out.outcome = Outcome::double_spent;
        return out;
    }
    OpCounter counter;
    out = settle_multivendor(commitment, deposits, counter);
    if (out.outcome == Outcome::settled) {
        bank.record(SettleEvent{commitment.id(), commitment.customer, out.credits, out.debit});
    }
    return out;
}

Settlement redeem_denominated(Bank& bank, const PaywordCommitment& commitment,
                              const SignaturePublicKey& customer_key, const std::string& vendor,
                              const Node& node, std::uint64_t claimed_total) {
    Settlement out;
    if (commitment.purpose != CommitmentPurpose::denomination) {
        return out;
    }
    if (!verify_commitment(commitment, customer_key)) {
        out.outcome = Outcome::bad_signature;
        return out;
    }
    std::scoped_lock lock(bank.mutex());
    if (bank.state().settled.contains(commitment.id())) {
        out.outcome = Outcome::double_spent;
        return out;
    }
    OpCounter counter;
    out.outcome = verify_denominated(commitment, node, claimed_total, counter);
    if (out.outcome != Outcome::accept) {
        return out;
    }
    out.outcome = Outcome::credited;
    out.settled_index = node.index;
    out.credits[vendor] = claimed_total;
    out.debit = claimed_total;
    bank.record(SettleEvent{commitment.id(), commitment.customer, out.credits, out.debit});
    return out;
}

std::optional<std::uint64_t> linear_payword_amount(const BigInt& root, const BigInt& payword,
                                                   std::uint32_t position, const BigInt& exponent,
                                                   const BigInt& modulus) {
    BigInt value = payword;
    for (std::uint32_t j = 0; j < position; ++j) {
        value = mod_pow(value, exponent, modulus);
    }
    if (value != root) {
        return std::nullopt;
    }
    return position;
}

}  // namespace mdhc
